#pragma once

#include <optional>
#include <span>
#include <vector>

#include "peb/types.hpp"

namespace peb {

/// A straight wall segment. The orientation angle of the supporting line is
/// reduced to [0, pi), measured from the +x axis.
struct Wall {
    Vec2 endpoint_a;
    Vec2 endpoint_b;
    double angle = 0.0;

    static Wall from_endpoints(const Vec2& a, const Vec2& b);

    double length() const { return (endpoint_b - endpoint_a).norm(); }
    Vec2 direction() const { return (endpoint_b - endpoint_a).normalized(); }
};

/// 2-D floorplan: wall segments plus a simple bounding polygon used for
/// grid masking. Walls default to the polygon edges but may be any set of
/// segments on or inside the polygon.
struct Floorplan {
    std::vector<Wall> walls;
    std::vector<Vec2> polygon;

    bool contains(const Vec2& p) const;
    /// Distance from p to the closest wall segment.
    double wall_distance(const Vec2& p) const;

    /// Axis-aligned rectangle [0,w] x [0,h] with four walls on its edges.
    static Floorplan rectangle(double width, double height);
    static Floorplan from_polygon(std::vector<Vec2> corners);
};

/// Mirror image of an anchor across an ordered sequence of walls.
/// order == 0 denotes the physical node itself.
struct VirtualAnchor {
    Vec2 position = Vec2::Zero();
    int parent = 0;                   // node index the VA belongs to
    std::vector<int> wall_sequence;   // wall indices, first mirror first
    int order = 0;
    double effective_angle = 0.0;     // nu, alternating sum of wall angles
};

/// Reflection of p across the infinite line through w.
Vec2 mirror_point(const Vec2& p, const Wall& w);

/// Alternating sum of wall orientation angles, sum_q (-1)^(q-1) gamma_q.
double effective_wall_angle(std::span<const Wall> sequence);

/// All virtual anchors of node `parent` at `node_position` up to order
/// q_max. Contains the order-0 entry first; consecutive repetitions of the
/// same wall are pruned (they compose to the identity).
std::vector<VirtualAnchor> build_vas(const Vec2& node_position, int parent,
                                     const Floorplan& plan, int q_max);

/// Physical propagation polyline [anchor, r_1, ..., r_Q, agent] obtained by
/// unfolding the straight agent->VA segment, or nullopt when any reflection
/// point leaves its wall segment or another wall blocks the path.
std::optional<std::vector<Vec2>> reflection_path(const Vec2& agent,
                                                 const VirtualAnchor& va,
                                                 const Floorplan& plan);

}  // namespace peb
