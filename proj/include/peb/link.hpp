#pragma once

#include <vector>

#include "peb/channel.hpp"
#include "peb/geometry.hpp"
#include "peb/gradients.hpp"
#include "peb/types.hpp"

namespace peb {

enum class LinkKind { bistatic, monostatic };

/// One visible multipath component of a link.
struct LinkMpc {
    VirtualAnchor va;
    double delay = 0.0;        // s
    double phi = 0.0;          // angle of (p_agent - p_va)
    double path_length = 0.0;  // m
    Complex amplitude;
};

/// Deterministic MPC set of one anchor(or VA-source)/agent pair, sorted by
/// delay, plus everything the FIM needs about the noise on this link.
struct LinkModel {
    LinkKind kind = LinkKind::bistatic;
    int anchor_node = 0;  // VA source (index j); equals agent_node for monostatic
    int agent_node = 0;   // receiving agent (index n)
    Vec2 agent_position = Vec2::Zero();
    std::vector<LinkMpc> mpcs;
    double tau_los = 0.0;  // DM onset delay of this link
    SampleWindow window;   // covers all MPC pulses incl. truncation tails

    int mpc_count() const { return static_cast<int>(mpcs.size()); }

    /// K x 2 gradient matrix matching the link kind: agent-side bistatic
    /// rows (1/c) e(phi) or monostatic rows.
    GradientMatrix agent_gradients() const;
    /// Anchor-side rows -(1/c) e((-1)^Q phi + 2 nu); bistatic links only.
    GradientMatrix anchor_gradients() const;
};

/// Collect the visible MPCs between `vas` (built from anchor_position) and
/// the agent, attach delays, angles and amplitudes, and lay out the sample
/// window. Monostatic links exclude the order-0 entry.
LinkModel build_link(LinkKind kind, int anchor_node, const Vec2& anchor_position,
                     const std::vector<VirtualAnchor>& vas, int agent_node,
                     const Vec2& agent_position, const Floorplan& plan,
                     const SignalParams& params);

}  // namespace peb
