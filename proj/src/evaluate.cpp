#include "peb/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

namespace peb {

namespace {
constexpr double kNodeClearance = 1e-6;  // m
}

GridSpec make_grid(const Floorplan& plan, double spacing)
{
    Vec2 lo(std::numeric_limits<double>::max(), std::numeric_limits<double>::max());
    Vec2 hi = -lo;
    for (const Vec2& p : plan.polygon) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    GridSpec grid;
    grid.origin = lo;
    grid.spacing = spacing;
    grid.nx = static_cast<int>(std::round((hi.x() - lo.x()) / spacing));
    grid.ny = static_cast<int>(std::round((hi.y() - lo.y()) / spacing));
    return grid;
}

struct ScenarioEvaluator::Impl {
    ScenarioConfig cfg;
    RrcPulse pulse;
    std::vector<std::vector<VirtualAnchor>> anchor_vas;  // per anchor (toa/tdoa)
    std::vector<int> anchor_group;                       // tdoa offset group per anchor
    int group_count = 0;
    // coop: node ordering equals cfg.agents; probe = the mobile agent
    int probe = 0;
    std::vector<std::vector<VirtualAnchor>> agent_vas;  // resting agents only
    std::vector<LinkModel> static_links;                // links not touching the probe

    explicit Impl(const ScenarioConfig& config)
        : cfg(config), pulse(config.signal.pulse_duration_s, config.signal.rolloff)
    {
        cfg.signal.validate();
        cfg.dm.validate();
        if (cfg.type == ScenarioType::toa || cfg.type == ScenarioType::tdoa) {
            for (const NodeSpec& a : cfg.anchors)
                anchor_vas.push_back(build_vas(a.position, 0, cfg.plan, cfg.q_max));
            assign_groups();
        }
        for (std::size_t i = 0; i < cfg.agents.size(); ++i)
            if (cfg.agents[i].mobile) probe = static_cast<int>(i);
        if (cfg.type == ScenarioType::coop) {
            agent_vas.resize(cfg.agents.size());
            for (std::size_t i = 0; i < cfg.agents.size(); ++i)
                if (static_cast<int>(i) != probe)
                    agent_vas[i] = build_vas(cfg.agents[i].position, static_cast<int>(i),
                                             cfg.plan, cfg.q_max);
            build_static_links();
        }
    }

    void assign_groups()
    {
        anchor_group.assign(cfg.anchors.size(), -1);
        for (const auto& group : cfg.sync_groups) {
            for (const std::string& id : group)
                for (std::size_t a = 0; a < cfg.anchors.size(); ++a)
                    if (cfg.anchors[a].id == id) anchor_group[a] = group_count;
            ++group_count;
        }
        for (int& g : anchor_group)
            if (g < 0) g = group_count++;
    }

    void build_static_links()
    {
        const int n = static_cast<int>(cfg.agents.size());
        for (int i = 0; i < n; ++i) {
            if (i == probe) continue;
            static_links.push_back(build_link(LinkKind::monostatic, i, cfg.agents[i].position,
                                              agent_vas[i], i, cfg.agents[i].position, cfg.plan,
                                              cfg.signal));
        }
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (i == probe || j == probe) continue;
                static_links.push_back(build_link(LinkKind::bistatic, i, cfg.agents[i].position,
                                                  agent_vas[i], j, cfg.agents[j].position,
                                                  cfg.plan, cfg.signal));
            }
    }

    PositionEfim evaluate(const Vec2& pos) const
    {
        switch (cfg.type) {
            case ScenarioType::toa: {
                std::vector<LinkModel> links = anchor_links(pos);
                return efim_position_toa(links, cfg.model, pulse, cfg.signal, cfg.dm);
            }
            case ScenarioType::tdoa: {
                std::vector<LinkModel> links = anchor_links(pos);
                return efim_position_tdoa(links, anchor_group, group_count, cfg.model, pulse,
                                          cfg.signal, cfg.dm);
            }
            case ScenarioType::mono: {
                auto vas = build_vas(pos, 0, cfg.plan, cfg.q_max);
                std::vector<LinkModel> links{build_link(LinkKind::monostatic, 0, pos, vas, 0,
                                                        pos, cfg.plan, cfg.signal)};
                return efim_position_toa(links, cfg.model, pulse, cfg.signal, cfg.dm);
            }
            case ScenarioType::coop: {
                std::vector<LinkModel> links = static_links;
                auto probe_vas = build_vas(pos, probe, cfg.plan, cfg.q_max);
                links.push_back(build_link(LinkKind::monostatic, probe, pos, probe_vas, probe,
                                           pos, cfg.plan, cfg.signal));
                const int n = static_cast<int>(cfg.agents.size());
                for (int i = 0; i < n; ++i) {
                    if (i == probe) continue;
                    // VA source is the lower-indexed node of the pair
                    if (i < probe)
                        links.push_back(build_link(LinkKind::bistatic, i,
                                                   cfg.agents[i].position, agent_vas[i], probe,
                                                   pos, cfg.plan, cfg.signal));
                    else
                        links.push_back(build_link(LinkKind::bistatic, probe, pos, probe_vas, i,
                                                   cfg.agents[i].position, cfg.plan, cfg.signal));
                }
                CoopResult coop = efim_position_coop(n, links, CoopOptions{}, cfg.model, pulse,
                                                     cfg.signal, cfg.dm);
                return coop.per_agent[probe];
            }
        }
        return {};
    }

    std::vector<LinkModel> anchor_links(const Vec2& pos) const
    {
        std::vector<LinkModel> links;
        links.reserve(cfg.anchors.size());
        for (std::size_t a = 0; a < cfg.anchors.size(); ++a)
            links.push_back(build_link(LinkKind::bistatic, static_cast<int>(a),
                                       cfg.anchors[a].position, anchor_vas[a], 0, pos, cfg.plan,
                                       cfg.signal));
        return links;
    }

    bool degenerate(const Vec2& pos) const
    {
        for (const NodeSpec& a : cfg.anchors)
            if ((pos - a.position).norm() < kNodeClearance) return true;
        for (const NodeSpec& a : cfg.agents)
            if (!a.mobile && (pos - a.position).norm() < kNodeClearance) return true;
        return false;
    }
};

ScenarioEvaluator::ScenarioEvaluator(const ScenarioConfig& config)
    : impl_(std::make_unique<Impl>(config))
{
}

ScenarioEvaluator::~ScenarioEvaluator() = default;

PositionEfim ScenarioEvaluator::evaluate_at(const Vec2& agent_position) const
{
    return impl_->evaluate(agent_position);
}

bool ScenarioEvaluator::is_degenerate_position(const Vec2& agent_position) const
{
    return impl_->degenerate(agent_position);
}

const ScenarioConfig& ScenarioEvaluator::config() const { return impl_->cfg; }

PebMap peb_map(const ScenarioConfig& config, int threads, const ProgressFn& progress)
{
    const ScenarioEvaluator evaluator(config);
    PebMap map;
    map.grid = make_grid(config.plan, config.grid_spacing);
    const std::size_t total = map.grid.count();
    map.values.assign(total, std::numeric_limits<double>::quiet_NaN());
    map.degenerate.assign(total, 0);

    std::vector<std::size_t> active;
    for (int iy = 0; iy < map.grid.ny; ++iy)
        for (int ix = 0; ix < map.grid.nx; ++ix) {
            const Vec2 p = map.grid.point(ix, iy);
            if (config.plan.contains(p) && config.plan.wall_distance(p) >= config.wall_margin)
                active.push_back(static_cast<std::size_t>(iy) * map.grid.nx + ix);
        }

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;
    std::size_t reported = 0;

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= active.size()) break;
            const std::size_t idx = active[i];
            const Vec2 p = map.grid.point(static_cast<int>(idx % map.grid.nx),
                                          static_cast<int>(idx / map.grid.nx));
            if (evaluator.is_degenerate_position(p)) {
                map.values[idx] = std::numeric_limits<double>::infinity();
                map.degenerate[idx] = 1;
            } else {
                try {
                    const PositionEfim efim = evaluator.evaluate_at(p);
                    map.values[idx] = peb(efim.info);
                    map.degenerate[idx] = efim.overlap_degenerate ? 1 : 0;
                } catch (const GeometryError&) {
                    map.values[idx] = std::numeric_limits<double>::infinity();
                    map.degenerate[idx] = 1;
                }
            }
            const std::size_t d = done.fetch_add(1) + 1;
            if (progress && d % 1000 == 0) {
                std::lock_guard lock(progress_mutex);
                if (d > reported) {
                    reported = d;
                    progress(d, active.size());
                }
            }
        }
    };

    const int n_threads = std::max(1, threads);
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (progress) progress(active.size(), active.size());
    return map;
}

CdfResult peb_cdf(const PebMap& map)
{
    std::vector<double> finite;
    std::size_t evaluated = 0;
    for (double v : map.values) {
        if (std::isnan(v)) continue;
        ++evaluated;
        if (std::isfinite(v)) finite.push_back(v);
    }
    CdfResult cdf;
    if (evaluated == 0) return cdf;
    std::sort(finite.begin(), finite.end());
    cdf.unresolved_fraction = 1.0 - static_cast<double>(finite.size()) / evaluated;
    cdf.points.reserve(finite.size());
    for (std::size_t i = 0; i < finite.size(); ++i)
        cdf.points.emplace_back(finite[i], static_cast<double>(i + 1) / evaluated);
    return cdf;
}

EllipseSamples ellipse_samples(const ScenarioConfig& config, std::span<const Vec2> points,
                               double scale)
{
    const ScenarioEvaluator evaluator(config);
    EllipseSamples result;
    for (const Vec2& p : points) {
        if (evaluator.is_degenerate_position(p)) {
            result.skipped.push_back(p);
            continue;
        }
        const PositionEfim efim = evaluator.evaluate_at(p);
        if (auto e = error_ellipse(efim.info, scale))
            result.ellipses.push_back(PointEllipse{p, *e});
        else
            result.skipped.push_back(p);
    }
    return result;
}

}  // namespace peb
