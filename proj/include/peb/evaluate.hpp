#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "peb/fim.hpp"
#include "peb/scenario.hpp"
#include "peb/types.hpp"

namespace peb {

/// Cell-centered evaluation grid over the floorplan bounding box.
struct GridSpec {
    Vec2 origin = Vec2::Zero();
    double spacing = 0.1;
    int nx = 0;
    int ny = 0;

    Vec2 point(int ix, int iy) const
    {
        return origin + Vec2((ix + 0.5) * spacing, (iy + 0.5) * spacing);
    }
    std::size_t count() const { return static_cast<std::size_t>(nx) * ny; }
};

GridSpec make_grid(const Floorplan& plan, double spacing);

/// PEB per grid point; NaN marks masked points (outside the polygon or
/// within the wall margin), +inf marks singular position information.
struct PebMap {
    GridSpec grid;
    std::vector<double> values;
    std::vector<std::uint8_t> degenerate;

    double& at(int ix, int iy) { return values[static_cast<std::size_t>(iy) * grid.nx + ix]; }
    double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * grid.nx + ix]; }
};

/// Precomputed per-scenario state (VA sets, static cooperative links);
/// evaluate_at is const and safe to call from many threads.
class ScenarioEvaluator {
public:
    explicit ScenarioEvaluator(const ScenarioConfig& config);
    ~ScenarioEvaluator();
    ScenarioEvaluator(const ScenarioEvaluator&) = delete;
    ScenarioEvaluator& operator=(const ScenarioEvaluator&) = delete;

    /// Position EFIM of the mobile agent placed at `agent_position`.
    PositionEfim evaluate_at(const Vec2& agent_position) const;

    /// True when the position is too close to another node for a
    /// meaningful link model.
    bool is_degenerate_position(const Vec2& agent_position) const;

    const ScenarioConfig& config() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Full grid sweep. Deterministic: results are stored by grid index, so the
/// output is bit-identical for any thread count.
PebMap peb_map(const ScenarioConfig& config, int threads, const ProgressFn& progress = {});

struct CdfResult {
    std::vector<std::pair<double, double>> points;  // (peb, cumulative fraction)
    double unresolved_fraction = 0.0;               // infinite-PEB share
};

CdfResult peb_cdf(const PebMap& map);

struct PointEllipse {
    Vec2 position = Vec2::Zero();
    Ellipse ellipse;
};

struct EllipseSamples {
    std::vector<PointEllipse> ellipses;
    std::vector<Vec2> skipped;  // singular points
};

EllipseSamples ellipse_samples(const ScenarioConfig& config, std::span<const Vec2> points,
                               double scale);

}  // namespace peb
