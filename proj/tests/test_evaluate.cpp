#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "peb/evaluate.hpp"
#include "peb/link.hpp"

using namespace peb;

namespace {

ScenarioConfig two_anchor_config()
{
    ScenarioConfig cfg;
    cfg.plan = Floorplan::rectangle(10.0, 7.2);
    cfg.anchors.push_back({"a1", Vec2(10.0, 7.0), false});
    cfg.anchors.push_back({"a2", Vec2(2.0, 1.0), false});
    cfg.agents.push_back({"m", Vec2(5.0, 3.0), true});
    cfg.type = ScenarioType::toa;
    cfg.q_max = 1;
    cfg.grid_spacing = 1.0;
    return cfg;
}

}  // namespace

TEST_CASE("grid construction")
{
    const Floorplan plan = Floorplan::rectangle(10.0, 7.2);

    SUBCASE("cell-centered fine grid")
    {
        const GridSpec g = make_grid(plan, 0.02);
        CHECK(g.nx == 500);
        CHECK(g.ny == 360);
        CHECK(g.count() == 180000);
        CHECK((g.point(0, 0) - Vec2(0.01, 0.01)).norm() < 1e-12);
        CHECK((g.point(499, 359) - Vec2(9.99, 7.19)).norm() < 1e-12);
    }
    SUBCASE("coarse grid rounds the cell count")
    {
        const GridSpec g = make_grid(plan, 1.0);
        CHECK(g.nx == 10);
        CHECK(g.ny == 7);
        CHECK((g.point(2, 3) - Vec2(2.5, 3.5)).norm() < 1e-12);
    }
    SUBCASE("offset floorplans keep their origin")
    {
        Floorplan shifted;
        shifted = Floorplan::from_polygon({{2, 1}, {6, 1}, {6, 4}, {2, 4}});
        const GridSpec g = make_grid(shifted, 0.5);
        CHECK((g.origin - Vec2(2, 1)).norm() < 1e-12);
        CHECK(g.nx == 8);
        CHECK(g.ny == 6);
    }
}

TEST_CASE("evaluator matches a hand-assembled link set")
{
    const ScenarioConfig cfg = two_anchor_config();
    const ScenarioEvaluator ev(cfg);
    const Vec2 pos(6.3, 2.1);

    const RrcPulse pulse(cfg.signal.pulse_duration_s, cfg.signal.rolloff);
    std::vector<LinkModel> links;
    for (std::size_t a = 0; a < cfg.anchors.size(); ++a) {
        const auto vas = build_vas(cfg.anchors[a].position, static_cast<int>(a), cfg.plan,
                                   cfg.q_max);
        links.push_back(build_link(LinkKind::bistatic, static_cast<int>(a),
                                   cfg.anchors[a].position, vas, 0, pos, cfg.plan, cfg.signal));
    }
    const Mat2 want = efim_position_toa(links, cfg.model, pulse, cfg.signal, cfg.dm).info;
    const Mat2 got = ev.evaluate_at(pos).info;
    CHECK((got - want).norm() < 1e-12 * want.norm());
    CHECK(std::isfinite(peb::peb(got)));
}

TEST_CASE("degenerate positions")
{
    ScenarioConfig cfg = two_anchor_config();
    cfg.agents.push_back({"rest", Vec2(4.0, 4.0), false});
    const ScenarioEvaluator ev(cfg);
    CHECK(ev.is_degenerate_position(Vec2(10.0, 7.0)));
    CHECK(ev.is_degenerate_position(Vec2(4.0, 4.0)));
    CHECK(!ev.is_degenerate_position(Vec2(5.0, 3.0)));
    CHECK(!ev.is_degenerate_position(Vec2(10.0, 6.9)));
}

TEST_CASE("peb_map masking and determinism")
{
    ScenarioConfig cfg = two_anchor_config();
    cfg.grid_spacing = 0.5;

    SUBCASE("mask covers exactly the margin band")
    {
        cfg.grid_spacing = 0.4;  // divides both room extents evenly
        cfg.wall_margin = 0.3;   // masks the outermost 0.2 m cell centers
        const PebMap map = peb_map(cfg, 1);
        REQUIRE(map.values.size() == map.grid.count());
        std::size_t masked = 0, finite = 0;
        for (int iy = 0; iy < map.grid.ny; ++iy)
            for (int ix = 0; ix < map.grid.nx; ++ix) {
                const double v = map.at(ix, iy);
                const bool edge = ix == 0 || iy == 0 || ix == map.grid.nx - 1 ||
                                  iy == map.grid.ny - 1;
                CHECK(std::isnan(v) == edge);
                masked += std::isnan(v);
                finite += std::isfinite(v);
            }
        CHECK(masked == 2 * (map.grid.nx + map.grid.ny) - 4);
        CHECK(finite > 0);
        for (double v : map.values)
            if (std::isfinite(v)) CHECK(v > 0.0);
    }
    SUBCASE("thread count does not change a single bit")
    {
        const PebMap one = peb_map(cfg, 1);
        const PebMap four = peb_map(cfg, 4);
        REQUIRE(one.values.size() == four.values.size());
        for (std::size_t i = 0; i < one.values.size(); ++i) {
            if (std::isnan(one.values[i]))
                CHECK(std::isnan(four.values[i]));
            else
                CHECK(one.values[i] == four.values[i]);
        }
        CHECK(one.degenerate == four.degenerate);
    }
    SUBCASE("wall order does not matter")
    {
        const PebMap base = peb_map(cfg, 1);
        ScenarioConfig shuffled = cfg;
        std::rotate(shuffled.plan.walls.begin(), shuffled.plan.walls.begin() + 2,
                    shuffled.plan.walls.end());
        const PebMap rot = peb_map(shuffled, 1);
        for (std::size_t i = 0; i < base.values.size(); ++i) {
            if (std::isnan(base.values[i]))
                CHECK(std::isnan(rot.values[i]));
            else
                CHECK(rot.values[i] == doctest::Approx(base.values[i]).epsilon(1e-9));
        }
    }
    SUBCASE("progress reaches the end")
    {
        std::size_t last_done = 0, last_total = 0;
        peb_map(cfg, 1, [&](std::size_t d, std::size_t t) {
            last_done = d;
            last_total = t;
        });
        CHECK(last_total > 0);
        CHECK(last_done == last_total);
    }
}

TEST_CASE("cdf of a map")
{
    ScenarioConfig cfg = two_anchor_config();
    cfg.grid_spacing = 0.5;
    const PebMap map = peb_map(cfg, 1);
    const CdfResult cdf = peb_cdf(map);

    REQUIRE(!cdf.points.empty());
    for (std::size_t i = 1; i < cdf.points.size(); ++i) {
        CHECK(cdf.points[i].first >= cdf.points[i - 1].first);
        CHECK(cdf.points[i].second > cdf.points[i - 1].second);
    }
    CHECK(cdf.points.front().second > 0.0);
    CHECK(cdf.points.back().second == doctest::Approx(1.0 - cdf.unresolved_fraction));
    CHECK(cdf.unresolved_fraction >= 0.0);

    SUBCASE("a single LOS-only anchor resolves nothing")
    {
        ScenarioConfig lone = cfg;
        lone.anchors.resize(1);
        lone.q_max = 0;
        const CdfResult c = peb_cdf(peb_map(lone, 1));
        CHECK(c.points.empty());
        CHECK(c.unresolved_fraction == doctest::Approx(1.0));
    }
    SUBCASE("empty map")
    {
        PebMap empty;
        empty.grid = GridSpec{};
        const CdfResult c = peb_cdf(empty);
        CHECK(c.points.empty());
        CHECK(c.unresolved_fraction == 0.0);
    }
}

TEST_CASE("ellipse samples")
{
    const ScenarioConfig cfg = two_anchor_config();
    const std::vector<Vec2> points{Vec2(5.0, 3.0), Vec2(7.0, 5.0), Vec2(10.0, 7.0)};

    const EllipseSamples s1 = ellipse_samples(cfg, points, 1.0);
    CHECK(s1.ellipses.size() == 2);
    REQUIRE(s1.skipped.size() == 1);  // the anchor position
    CHECK((s1.skipped[0] - Vec2(10.0, 7.0)).norm() == 0.0);
    for (const PointEllipse& pe : s1.ellipses) {
        CHECK(pe.ellipse.semi_major >= pe.ellipse.semi_minor);
        CHECK(pe.ellipse.semi_minor > 0.0);
        CHECK(pe.ellipse.orientation >= 0.0);
        CHECK(pe.ellipse.orientation < std::numbers::pi);
    }

    SUBCASE("axes scale linearly")
    {
        const EllipseSamples s3 = ellipse_samples(cfg, points, 3.0);
        REQUIRE(s3.ellipses.size() == s1.ellipses.size());
        for (std::size_t i = 0; i < s1.ellipses.size(); ++i) {
            CHECK(s3.ellipses[i].ellipse.semi_major ==
                  doctest::Approx(3.0 * s1.ellipses[i].ellipse.semi_major).epsilon(1e-12));
            CHECK(s3.ellipses[i].ellipse.orientation ==
                  doctest::Approx(s1.ellipses[i].ellipse.orientation).epsilon(1e-12));
        }
    }
}

TEST_CASE("monostatic and cooperative evaluators")
{
    ScenarioConfig mono;
    mono.plan = Floorplan::rectangle(10.0, 7.2);
    mono.agents.push_back({"m", Vec2(3.0, 2.0), true});
    mono.type = ScenarioType::mono;
    mono.q_max = 2;

    const ScenarioEvaluator mono_ev(mono);
    const Vec2 pos(3.7, 2.4);
    const double mono_peb = peb::peb(mono_ev.evaluate_at(pos).info);
    CHECK(std::isfinite(mono_peb));
    CHECK(mono_peb > 0.0);

    ScenarioConfig coop = mono;
    coop.type = ScenarioType::coop;
    coop.agents.push_back({"m2", Vec2(8.0, 5.0), false});
    const ScenarioEvaluator coop_ev(coop);
    const double coop_peb = peb::peb(coop_ev.evaluate_at(pos).info);
    CHECK(std::isfinite(coop_peb));
    CHECK(coop_peb < mono_peb);  // the partner's links add information
}
