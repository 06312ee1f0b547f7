#pragma once

#include <span>
#include <vector>

#include "peb/geometry.hpp"
#include "peb/types.hpp"

namespace peb {

/// Role of a stacked gradient matrix.
enum class GradientRole { agent, anchor, monostatic, general };

/// Rows are transposed delay gradients (s/m), one per MPC.
struct GradientMatrix {
    Eigen::Matrix<double, Eigen::Dynamic, 2> rows;
    GradientRole role = GradientRole::general;
};

/// MPC delay tau = |p_agent - p_va| / c.
double mpc_delay(const Vec2& agent, const VirtualAnchor& va);

/// Angle of (p_agent - p_va). Throws GeometryError when the agent
/// coincides with the VA (closer than 1e-9 m).
double mpc_angle(const Vec2& agent, const VirtualAnchor& va);

/// Jacobian d p_va / d p_anchor. Orthogonal with determinant (-1)^Q; its
/// transpose is Rot(2 nu) * diag(1,-1)^Q.
Mat2 va_jacobian(const VirtualAnchor& va);

/// General spatial delay gradient of tau^(j,n) w.r.t. node l:
/// (1/c) (delta_{n,l} e(phi) - delta_{l,j} e((-1)^Q phi + 2 nu)).
/// Zero for nodes not involved in the link.
Vec2 delay_gradient(const VirtualAnchor& va, const Vec2& agent, int wrt_node,
                    int agent_node, int anchor_node);

/// Bistatic gradient w.r.t. the agent: (1/c) e(phi). Norm is exactly 1/c.
Vec2 gradient_agent(const VirtualAnchor& va, const Vec2& agent);

/// Bistatic gradient w.r.t. the anchor: -(1/c) e((-1)^Q phi + 2 nu),
/// which points along the reverse link direction.
Vec2 gradient_anchor(const VirtualAnchor& va, const Vec2& agent);

/// Monostatic gradient (agent observing its own reflections, Q >= 1):
/// (1/c) (e(phi) - e((-1)^Q phi + 2 nu)). Norm lies in [0, 2/c].
Vec2 gradient_mono(const VirtualAnchor& va, const Vec2& agent);

/// Closed parity form of the monostatic gradient:
///   Q even: (2/c) sin(nu)       e(phi + nu - pi/2)
///   Q odd:  (2/c) sin(nu - phi) e(nu - pi/2)
Vec2 gradient_mono_parity(const VirtualAnchor& va, const Vec2& agent);

/// Stack gradients row-wise into a K x 2 matrix.
GradientMatrix stack_gradients(std::span<const Vec2> gradients, GradientRole role);

}  // namespace peb
