#include "peb/gradients.hpp"

#include <cmath>
#include <numbers>

namespace peb {

namespace {
constexpr double kDegenerate = 1e-9;  // m
}

double mpc_delay(const Vec2& agent, const VirtualAnchor& va)
{
    return (agent - va.position).norm() / kSpeedOfLight;
}

double mpc_angle(const Vec2& agent, const VirtualAnchor& va)
{
    const Vec2 d = agent - va.position;
    if (d.norm() < kDegenerate)
        throw GeometryError("agent coincides with virtual anchor, angle undefined");
    return std::atan2(d.y(), d.x());
}

Mat2 va_jacobian(const VirtualAnchor& va)
{
    Mat2 jt = rotation(2.0 * va.effective_angle);
    if (va.order % 2 == 1) jt.col(1) = -jt.col(1);  // right-multiply by diag(1,-1)
    return jt.transpose();
}

Vec2 delay_gradient(const VirtualAnchor& va, const Vec2& agent, int wrt_node,
                    int agent_node, int anchor_node)
{
    if (wrt_node != agent_node && wrt_node != anchor_node) return Vec2::Zero();
    const double phi = mpc_angle(agent, va);
    const double parity = (va.order % 2 == 0) ? 1.0 : -1.0;
    Vec2 g = Vec2::Zero();
    if (wrt_node == agent_node) g += unit_vector(phi);
    if (wrt_node == anchor_node)
        g -= unit_vector(parity * phi + 2.0 * va.effective_angle);
    return g / kSpeedOfLight;
}

Vec2 gradient_agent(const VirtualAnchor& va, const Vec2& agent)
{
    return unit_vector(mpc_angle(agent, va)) / kSpeedOfLight;
}

Vec2 gradient_anchor(const VirtualAnchor& va, const Vec2& agent)
{
    const double phi = mpc_angle(agent, va);
    const double parity = (va.order % 2 == 0) ? 1.0 : -1.0;
    return -unit_vector(parity * phi + 2.0 * va.effective_angle) / kSpeedOfLight;
}

Vec2 gradient_mono(const VirtualAnchor& va, const Vec2& agent)
{
    if (va.order < 1) throw GeometryError("monostatic gradient requires Q >= 1");
    const double phi = mpc_angle(agent, va);
    const double parity = (va.order % 2 == 0) ? 1.0 : -1.0;
    const Vec2 g = unit_vector(phi) - unit_vector(parity * phi + 2.0 * va.effective_angle);
    return g / kSpeedOfLight;
}

Vec2 gradient_mono_parity(const VirtualAnchor& va, const Vec2& agent)
{
    if (va.order < 1) throw GeometryError("monostatic gradient requires Q >= 1");
    const double phi = mpc_angle(agent, va);
    const double nu = va.effective_angle;
    constexpr double half_pi = std::numbers::pi / 2.0;
    const double two_over_c = 2.0 / kSpeedOfLight;
    if (va.order % 2 == 0)
        return two_over_c * std::sin(nu) * unit_vector(phi + nu - half_pi);
    return two_over_c * std::sin(nu - phi) * unit_vector(nu - half_pi);
}

GradientMatrix stack_gradients(std::span<const Vec2> gradients, GradientRole role)
{
    GradientMatrix m;
    m.role = role;
    m.rows.resize(static_cast<Eigen::Index>(gradients.size()), 2);
    for (Eigen::Index k = 0; k < m.rows.rows(); ++k)
        m.rows.row(k) = gradients[static_cast<std::size_t>(k)].transpose();
    return m;
}

}  // namespace peb
