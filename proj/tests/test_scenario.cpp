#include <doctest.h>

#include "peb/scenario.hpp"

using namespace peb;

namespace {

const char* kMinimal = R"({
  "floorplan": {"polygon": [[0, 0], [10, 0], [10, 7.2], [0, 7.2]]},
  "anchors": [{"id": "a1", "x": 10, "y": 7}, {"id": "a2", "x": 2, "y": 1}],
  "agents": [{"id": "m", "x": 5, "y": 3}]
})";

}  // namespace

TEST_CASE("parsing a minimal config")
{
    const ScenarioConfig cfg = parse_scenario(kMinimal);
    CHECK(cfg.plan.polygon.size() == 4);
    CHECK(cfg.plan.walls.size() == 4);  // polygon edges become walls
    REQUIRE(cfg.anchors.size() == 2);
    CHECK(cfg.anchors[0].id == "a1");
    CHECK((cfg.anchors[0].position - Vec2(10, 7)).norm() == 0.0);
    CHECK(!cfg.anchors[0].mobile);
    REQUIRE(cfg.agents.size() == 1);
    CHECK(cfg.agents[0].mobile);  // first agent is mobile by default
    CHECK(cfg.type == ScenarioType::toa);
    CHECK(cfg.q_max == 2);
    CHECK(cfg.model == OverlapModel::no_overlap);
    CHECK(cfg.signal.carrier_hz == 7e9);
    CHECK(cfg.signal.pulse_duration_s == 1e-9);
    CHECK(cfg.dm.power == 1.16e-6);
    CHECK(cfg.grid_spacing == 0.1);
    CHECK(validate_scenario(cfg).empty());
}

TEST_CASE("parsing every optional section")
{
    const char* text = R"({
      "floorplan": {
        "polygon": [[0, 0], [8, 0], [8, 5], [0, 5]],
        "walls": [[[0, 0], [8, 0]], [[4, 0], [4, 3]]]
      },
      "anchors": [{"id": "a1", "x": 7, "y": 4}, {"id": "a2", "x": 1, "y": 1}],
      "agents": [{"id": "m", "x": 2, "y": 2}],
      "scenario": "tdoa",
      "sync_groups": [["a1", "a2"]],
      "q_max": 1,
      "signal": {"pulse_duration_s": 5e-10, "sample_fraction": 8, "noise_psd": 1e-8,
                 "carrier_hz": 6e9, "rolloff": 0.5, "reflection_loss_db": 2.5},
      "dm": {"power": 2e-6, "gamma1_s": 15e-9, "gamma_rise_s": 4e-9, "chi": 0.9},
      "model": "full",
      "grid": {"spacing_m": 0.5, "wall_margin_m": 0.05},
      "ellipse": {"scale": 10, "points": [[1, 1], [4, 2.5]]},
      "raster": {"log_min": -2, "log_max": 0}
    })";
    const ScenarioConfig cfg = parse_scenario(text);
    CHECK(cfg.plan.walls.size() == 2);  // explicit wall list replaces the polygon edges
    CHECK(cfg.type == ScenarioType::tdoa);
    REQUIRE(cfg.sync_groups.size() == 1);
    CHECK(cfg.sync_groups[0] == std::vector<std::string>{"a1", "a2"});
    CHECK(cfg.q_max == 1);
    CHECK(cfg.signal.pulse_duration_s == 5e-10);
    CHECK(cfg.signal.sample_fraction == 8);
    CHECK(cfg.signal.carrier_hz == 6e9);
    CHECK(cfg.signal.rolloff == 0.5);
    CHECK(cfg.signal.reflection_loss_db == 2.5);
    CHECK(cfg.dm.chi == 0.9);
    CHECK(cfg.model == OverlapModel::full);
    CHECK(cfg.grid_spacing == 0.5);
    CHECK(cfg.wall_margin == 0.05);
    CHECK(cfg.ellipse_scale == 10);
    REQUIRE(cfg.ellipse_points.size() == 2);
    CHECK((cfg.ellipse_points[1] - Vec2(4, 2.5)).norm() == 0.0);
    CHECK(cfg.raster_log_min == -2);
    CHECK(cfg.raster_log_max == 0);
    CHECK(validate_scenario(cfg).empty());
}

TEST_CASE("parse errors")
{
    CHECK_THROWS_AS(parse_scenario("not json"), ParseError);
    CHECK_THROWS_AS(parse_scenario("{}"), ParseError);  // missing floorplan
    CHECK_THROWS_AS(parse_scenario(R"({"floorplan": {"polygon": [[0, 0], [1, 0]]}})"),
                    ParseError);  // too few corners
    CHECK_THROWS_AS(
        parse_scenario(
            R"({"floorplan": {"polygon": [[0,0],[1,0],[1,1]]}, "scenario": "aoa"})"),
        ParseError);
    CHECK_THROWS_AS(
        parse_scenario(
            R"({"floorplan": {"polygon": [[0,0],[1,0],[1,1]]}, "model": "exact"})"),
        ParseError);
    CHECK_THROWS_AS(
        parse_scenario(
            R"({"floorplan": {"polygon": [[0,0],[1,0],[1,1]]}, "anchors": [{"id": "a"}]})"),
        ParseError);  // node without coordinates
    CHECK_THROWS_AS(load_scenario("/nonexistent/path.json"), ParseError);
}

TEST_CASE("validation catches semantic problems")
{
    auto problems_of = [](auto mutate) {
        ScenarioConfig cfg = parse_scenario(kMinimal);
        mutate(cfg);
        return validate_scenario(cfg);
    };

    SUBCASE("node outside the polygon")
    {
        auto p = problems_of([](ScenarioConfig& c) { c.anchors[0].position = {20, 1}; });
        REQUIRE(p.size() == 1);
        CHECK(p[0].find("outside") != std::string::npos);
    }
    SUBCASE("duplicate ids")
    {
        auto p = problems_of([](ScenarioConfig& c) { c.agents[0].id = "a1"; });
        CHECK(!p.empty());
        CHECK(p[0].find("duplicate") != std::string::npos);
    }
    SUBCASE("mobile agent count")
    {
        auto none = problems_of([](ScenarioConfig& c) { c.agents[0].mobile = false; });
        CHECK(!none.empty());
        auto two = problems_of([](ScenarioConfig& c) {
            c.agents.push_back({"m2", Vec2(6, 4), true});
        });
        CHECK(!two.empty());
    }
    SUBCASE("scenario and role consistency")
    {
        auto p = problems_of([](ScenarioConfig& c) { c.anchors.clear(); });
        CHECK(!p.empty());  // toa without anchors
        auto q = problems_of([](ScenarioConfig& c) { c.type = ScenarioType::mono; });
        CHECK(!q.empty());  // mono with anchors
    }
    SUBCASE("sync group references")
    {
        auto p = problems_of([](ScenarioConfig& c) { c.sync_groups = {{"ghost"}}; });
        CHECK(!p.empty());
        auto q = problems_of([](ScenarioConfig& c) { c.sync_groups = {{"a1"}, {"a1"}}; });
        CHECK(!q.empty());
    }
    SUBCASE("self-intersecting polygon")
    {
        auto p = problems_of([](ScenarioConfig& c) {
            std::swap(c.plan.polygon[1], c.plan.polygon[2]);
        });
        CHECK(!p.empty());
    }
    SUBCASE("wall endpoint outside")
    {
        auto p = problems_of([](ScenarioConfig& c) {
            c.plan.walls.push_back(Wall::from_endpoints({5, 5}, {15, 5}));
        });
        CHECK(!p.empty());
    }
    SUBCASE("numeric parameters")
    {
        CHECK(!problems_of([](ScenarioConfig& c) { c.q_max = -1; }).empty());
        CHECK(!problems_of([](ScenarioConfig& c) { c.grid_spacing = 0; }).empty());
        CHECK(!problems_of([](ScenarioConfig& c) { c.signal.sample_fraction = 2; }).empty());
        CHECK(!problems_of([](ScenarioConfig& c) { c.dm.chi = 2; }).empty());
        CHECK(!problems_of([](ScenarioConfig& c) { c.raster_log_max = -5; }).empty());
    }
    SUBCASE("several problems are all reported")
    {
        auto p = problems_of([](ScenarioConfig& c) {
            c.q_max = -1;
            c.grid_spacing = 0;
            c.agents[0].position = {50, 50};
        });
        CHECK(p.size() >= 3);
    }
}

TEST_CASE("enum names round-trip")
{
    CHECK(to_string(ScenarioType::toa) == "toa");
    CHECK(to_string(ScenarioType::tdoa) == "tdoa");
    CHECK(to_string(ScenarioType::mono) == "mono");
    CHECK(to_string(ScenarioType::coop) == "coop");
    CHECK(to_string(OverlapModel::full) == "full");
    CHECK(to_string(OverlapModel::no_overlap) == "no-overlap");
}
