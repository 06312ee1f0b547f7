#include "peb/link.hpp"

#include <algorithm>
#include <cmath>

namespace peb {

GradientMatrix LinkModel::agent_gradients() const
{
    std::vector<Vec2> g;
    g.reserve(mpcs.size());
    for (const LinkMpc& m : mpcs)
        g.push_back(kind == LinkKind::monostatic ? gradient_mono(m.va, agent_position)
                                                 : gradient_agent(m.va, agent_position));
    return stack_gradients(g, kind == LinkKind::monostatic ? GradientRole::monostatic
                                                           : GradientRole::agent);
}

GradientMatrix LinkModel::anchor_gradients() const
{
    std::vector<Vec2> g;
    g.reserve(mpcs.size());
    for (const LinkMpc& m : mpcs) g.push_back(gradient_anchor(m.va, agent_position));
    return stack_gradients(g, GradientRole::anchor);
}

LinkModel build_link(LinkKind kind, int anchor_node, const Vec2& anchor_position,
                     const std::vector<VirtualAnchor>& vas, int agent_node,
                     const Vec2& agent_position, const Floorplan& plan,
                     const SignalParams& params)
{
    LinkModel link;
    link.kind = kind;
    link.anchor_node = anchor_node;
    link.agent_node = agent_node;
    link.agent_position = agent_position;

    for (const VirtualAnchor& va : vas) {
        if (kind == LinkKind::monostatic && va.order == 0) continue;
        auto path = reflection_path(agent_position, va, plan);
        if (!path) continue;
        LinkMpc m;
        m.va = va;
        m.path_length = (agent_position - va.position).norm();
        m.delay = m.path_length / kSpeedOfLight;
        m.phi = mpc_angle(agent_position, va);
        m.amplitude = mpc_amplitude(m.path_length, m.delay, va.order, params);
        link.mpcs.push_back(std::move(m));
    }
    std::sort(link.mpcs.begin(), link.mpcs.end(),
              [](const LinkMpc& a, const LinkMpc& b) { return a.delay < b.delay; });

    // DM onset: geometric LOS delay for bistatic links (whether or not the
    // LOS component is visible); first arrival for monostatic links.
    if (kind == LinkKind::bistatic)
        link.tau_los = (agent_position - anchor_position).norm() / kSpeedOfLight;
    else
        link.tau_los = link.mpcs.empty() ? 0.0 : link.mpcs.front().delay;

    if (!link.mpcs.empty()) {
        const double ts = params.sample_period();
        const double pad = 8.0 * params.pulse_duration_s + ts;
        const double lo = link.mpcs.front().delay - pad;
        const double hi = link.mpcs.back().delay + pad;
        link.window.dt = ts;
        link.window.t_start = std::floor(lo / ts) * ts;
        link.window.size = static_cast<int>(std::ceil((hi - link.window.t_start) / ts)) + 1;
    }
    return link;
}

}  // namespace peb
