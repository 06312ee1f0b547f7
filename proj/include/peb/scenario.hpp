#pragma once

#include <string>
#include <vector>

#include "peb/channel.hpp"
#include "peb/fim.hpp"
#include "peb/geometry.hpp"
#include "peb/types.hpp"

namespace peb {

enum class ScenarioType { toa, tdoa, mono, coop };

struct NodeSpec {
    std::string id;
    Vec2 position = Vec2::Zero();
    bool mobile = false;  // agents only: the node swept over the grid
};

/// Complete evaluation setup parsed from a config file.
struct ScenarioConfig {
    Floorplan plan;
    std::vector<NodeSpec> anchors;
    std::vector<NodeSpec> agents;
    ScenarioType type = ScenarioType::toa;
    std::vector<std::vector<std::string>> sync_groups;  // tdoa only
    int q_max = 2;
    SignalParams signal;
    DmParams dm;
    OverlapModel model = OverlapModel::no_overlap;
    double grid_spacing = 0.1;        // m
    double wall_margin = 0.01;        // m, grid mask distance
    double ellipse_scale = 20.0;
    std::vector<Vec2> ellipse_points; // empty: subsample the grid
    double raster_log_min = -3.0;     // log10 PEB bounds for PGM output
    double raster_log_max = 1.0;
};

/// Malformed config file (unreadable, bad JSON, wrong field types).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& json_text);

/// Constraint report; empty means the scenario is valid.
std::vector<std::string> validate_scenario(const ScenarioConfig& config);

std::string to_string(ScenarioType t);
std::string to_string(OverlapModel m);

}  // namespace peb
