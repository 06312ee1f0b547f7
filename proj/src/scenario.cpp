#include "peb/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace peb {

namespace {

using nlohmann::json;

Vec2 parse_point(const json& j)
{
    if (!j.is_array() || j.size() != 2) throw ParseError("point must be a [x, y] pair");
    return Vec2(j[0].get<double>(), j[1].get<double>());
}

NodeSpec parse_node(const json& j, bool default_mobile)
{
    NodeSpec n;
    n.id = j.at("id").get<std::string>();
    n.position = Vec2(j.at("x").get<double>(), j.at("y").get<double>());
    n.mobile = j.value("mobile", default_mobile);
    return n;
}

ScenarioType parse_type(const std::string& s)
{
    if (s == "toa") return ScenarioType::toa;
    if (s == "tdoa") return ScenarioType::tdoa;
    if (s == "mono") return ScenarioType::mono;
    if (s == "coop") return ScenarioType::coop;
    throw ParseError("unknown scenario type '" + s + "'");
}

OverlapModel parse_model(const std::string& s)
{
    if (s == "full") return OverlapModel::full;
    if (s == "no-overlap") return OverlapModel::no_overlap;
    throw ParseError("unknown model '" + s + "' (expected 'full' or 'no-overlap')");
}

bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d)
{
    auto side = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        return (q.x() - p.x()) * (r.y() - p.y()) - (q.y() - p.y()) * (r.x() - p.x());
    };
    const double s1 = side(a, b, c), s2 = side(a, b, d);
    const double s3 = side(c, d, a), s4 = side(c, d, b);
    return s1 * s2 < 0.0 && s3 * s4 < 0.0;
}

}  // namespace

std::string to_string(ScenarioType t)
{
    switch (t) {
        case ScenarioType::toa: return "toa";
        case ScenarioType::tdoa: return "tdoa";
        case ScenarioType::mono: return "mono";
        case ScenarioType::coop: return "coop";
    }
    return "?";
}

std::string to_string(OverlapModel m)
{
    return m == OverlapModel::full ? "full" : "no-overlap";
}

ScenarioConfig parse_scenario(const std::string& json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    try {
        ScenarioConfig cfg;
        const json& fp = j.at("floorplan");
        std::vector<Vec2> corners;
        for (const json& p : fp.at("polygon")) corners.push_back(parse_point(p));
        cfg.plan = Floorplan::from_polygon(std::move(corners));
        if (fp.contains("walls")) {
            cfg.plan.walls.clear();
            for (const json& w : fp.at("walls"))
                cfg.plan.walls.push_back(Wall::from_endpoints(parse_point(w.at(0)), parse_point(w.at(1))));
        }
        for (const json& a : j.value("anchors", json::array())) cfg.anchors.push_back(parse_node(a, false));
        bool first_agent = true;
        for (const json& a : j.value("agents", json::array())) {
            cfg.agents.push_back(parse_node(a, first_agent));
            first_agent = false;
        }
        cfg.type = parse_type(j.value("scenario", std::string("toa")));
        for (const json& g : j.value("sync_groups", json::array())) {
            std::vector<std::string> ids;
            for (const json& id : g) ids.push_back(id.get<std::string>());
            cfg.sync_groups.push_back(std::move(ids));
        }
        cfg.q_max = j.value("q_max", 2);
        if (j.contains("signal")) {
            const json& s = j.at("signal");
            cfg.signal.carrier_hz = s.value("carrier_hz", cfg.signal.carrier_hz);
            cfg.signal.pulse_duration_s = s.value("pulse_duration_s", cfg.signal.pulse_duration_s);
            cfg.signal.rolloff = s.value("rolloff", cfg.signal.rolloff);
            cfg.signal.sample_fraction = s.value("sample_fraction", cfg.signal.sample_fraction);
            cfg.signal.noise_psd = s.value("noise_psd", cfg.signal.noise_psd);
            cfg.signal.reflection_loss_db = s.value("reflection_loss_db", cfg.signal.reflection_loss_db);
        }
        if (j.contains("dm")) {
            const json& d = j.at("dm");
            cfg.dm.power = d.value("power", cfg.dm.power);
            cfg.dm.gamma1_s = d.value("gamma1_s", cfg.dm.gamma1_s);
            cfg.dm.gamma_rise_s = d.value("gamma_rise_s", cfg.dm.gamma_rise_s);
            cfg.dm.chi = d.value("chi", cfg.dm.chi);
        }
        cfg.model = parse_model(j.value("model", std::string("no-overlap")));
        if (j.contains("grid")) {
            cfg.grid_spacing = j.at("grid").value("spacing_m", cfg.grid_spacing);
            cfg.wall_margin = j.at("grid").value("wall_margin_m", cfg.wall_margin);
        }
        if (j.contains("ellipse")) {
            cfg.ellipse_scale = j.at("ellipse").value("scale", cfg.ellipse_scale);
            for (const json& p : j.at("ellipse").value("points", json::array()))
                cfg.ellipse_points.push_back(parse_point(p));
        }
        if (j.contains("raster")) {
            cfg.raster_log_min = j.at("raster").value("log_min", cfg.raster_log_min);
            cfg.raster_log_max = j.at("raster").value("log_max", cfg.raster_log_max);
        }
        return cfg;
    } catch (const json::exception& e) {
        throw ParseError(std::string("config structure: ") + e.what());
    } catch (const GeometryError& e) {
        throw ParseError(std::string("config geometry: ") + e.what());
    }
}

ScenarioConfig load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::vector<std::string> validate_scenario(const ScenarioConfig& cfg)
{
    std::vector<std::string> problems;
    auto complain = [&](const std::string& msg) { problems.push_back(msg); };

    const auto& poly = cfg.plan.polygon;
    auto on_or_inside = [&](const Vec2& p) {
        if (cfg.plan.contains(p)) return true;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Vec2& a = poly[i];
            const Vec2& b = poly[(i + 1) % poly.size()];
            const Vec2 d = b - a;
            const double t = std::clamp((p - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
            if ((p - (a + t * d)).norm() < 1e-9) return true;
        }
        return false;
    };
    for (std::size_t i = 0; i < poly.size(); ++i)
        for (std::size_t k = i + 1; k < poly.size(); ++k) {
            if (k == i + 1 || (i == 0 && k == poly.size() - 1)) continue;
            if (segments_cross(poly[i], poly[(i + 1) % poly.size()], poly[k],
                               poly[(k + 1) % poly.size()]))
                complain("bounding polygon is self-intersecting");
        }
    for (std::size_t w = 0; w < cfg.plan.walls.size(); ++w) {
        const Wall& wall = cfg.plan.walls[w];
        for (const Vec2& p : {wall.endpoint_a, wall.endpoint_b})
            if (!on_or_inside(p))
                complain("wall " + std::to_string(w) + " endpoint lies outside the polygon");
    }

    std::set<std::string> ids;
    auto check_node = [&](const NodeSpec& n, const char* role) {
        if (!ids.insert(n.id).second) complain("duplicate node id '" + n.id + "'");
        if (!on_or_inside(n.position))
            complain(std::string(role) + " '" + n.id + "' lies outside the polygon");
    };
    for (const NodeSpec& a : cfg.anchors) check_node(a, "anchor");
    for (const NodeSpec& a : cfg.agents) check_node(a, "agent");

    int mobile = 0;
    for (const NodeSpec& a : cfg.agents) mobile += a.mobile ? 1 : 0;
    if (mobile != 1) complain("exactly one mobile agent is required");
    switch (cfg.type) {
        case ScenarioType::toa:
        case ScenarioType::tdoa:
            if (cfg.anchors.empty()) complain("toa/tdoa scenarios need at least one anchor");
            break;
        case ScenarioType::mono:
            if (!cfg.anchors.empty()) complain("mono scenario must not define anchors");
            break;
        case ScenarioType::coop:
            if (!cfg.anchors.empty()) complain("coop scenario must not define anchors");
            if (cfg.agents.empty()) complain("coop scenario needs agents");
            break;
    }
    std::set<std::string> grouped;
    for (const auto& group : cfg.sync_groups)
        for (const std::string& id : group) {
            bool found = false;
            for (const NodeSpec& a : cfg.anchors) found |= a.id == id;
            if (!found) complain("sync group references unknown anchor '" + id + "'");
            if (!grouped.insert(id).second)
                complain("anchor '" + id + "' appears in more than one sync group");
        }

    if (cfg.q_max < 0) complain("q_max must be non-negative");
    if (cfg.grid_spacing <= 0) complain("grid spacing must be positive");
    if (cfg.ellipse_scale <= 0) complain("ellipse scale must be positive");
    if (cfg.raster_log_max <= cfg.raster_log_min) complain("raster log bounds are inverted");
    try {
        cfg.signal.validate();
        cfg.dm.validate();
    } catch (const std::invalid_argument& e) {
        complain(e.what());
    }
    return problems;
}

}  // namespace peb
