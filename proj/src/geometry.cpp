#include "peb/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace peb {

namespace {

constexpr double kEps = 1e-9;

// Orientation angle of direction d, reduced to [0, pi).
double line_angle(const Vec2& d)
{
    double a = std::atan2(d.y(), d.x());
    if (a < 0.0) a += std::numbers::pi;
    if (a >= std::numbers::pi) a -= std::numbers::pi;
    return a;
}

// Intersection of segments p->p+r and q->q+s. Returns parameters (t, u)
// with intersection = p + t*r; nullopt for (near-)parallel segments.
std::optional<std::pair<double, double>> intersect_params(const Vec2& p, const Vec2& r,
                                                          const Vec2& q, const Vec2& s)
{
    const double denom = r.x() * s.y() - r.y() * s.x();
    const double scale = r.norm() * s.norm();
    if (std::abs(denom) < 1e-14 * scale) return std::nullopt;
    const Vec2 qp = q - p;
    const double t = (qp.x() * s.y() - qp.y() * s.x()) / denom;
    const double u = (qp.x() * r.y() - qp.y() * r.x()) / denom;
    return std::make_pair(t, u);
}

// True when any wall other than the reflection contacts blocks segment a->b.
// Intersections within eps of either segment end are the reflection points
// themselves and do not count as blockers.
bool segment_blocked(const Vec2& a, const Vec2& b, const Floorplan& plan)
{
    const Vec2 r = b - a;
    const double len = r.norm();
    if (len < kEps) return false;
    const double t_eps = kEps / len;
    for (const Wall& w : plan.walls) {
        const Vec2 s = w.endpoint_b - w.endpoint_a;
        auto hit = intersect_params(a, r, w.endpoint_a, s);
        if (!hit) continue;
        const auto [t, u] = *hit;
        const double u_eps = kEps / w.length();
        if (t > t_eps && t < 1.0 - t_eps && u > u_eps && u < 1.0 - u_eps) return true;
    }
    return false;
}

}  // namespace

Wall Wall::from_endpoints(const Vec2& a, const Vec2& b)
{
    if ((b - a).norm() < kEps) throw GeometryError("degenerate wall of zero length");
    return Wall{a, b, line_angle(b - a)};
}

bool Floorplan::contains(const Vec2& p) const
{
    // Ray casting along +x.
    bool inside = false;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& pi = polygon[i];
        const Vec2& pj = polygon[j];
        if ((pi.y() > p.y()) != (pj.y() > p.y())) {
            const double x = pj.x() + (p.y() - pj.y()) / (pi.y() - pj.y()) * (pi.x() - pj.x());
            if (p.x() < x) inside = !inside;
        }
    }
    return inside;
}

double Floorplan::wall_distance(const Vec2& p) const
{
    double best = std::numeric_limits<double>::infinity();
    for (const Wall& w : walls) {
        const Vec2 d = w.endpoint_b - w.endpoint_a;
        const double t = std::clamp((p - w.endpoint_a).dot(d) / d.squaredNorm(), 0.0, 1.0);
        best = std::min(best, (p - (w.endpoint_a + t * d)).norm());
    }
    return best;
}

Floorplan Floorplan::rectangle(double width, double height)
{
    return from_polygon({Vec2(0, 0), Vec2(width, 0), Vec2(width, height), Vec2(0, height)});
}

Floorplan Floorplan::from_polygon(std::vector<Vec2> corners)
{
    if (corners.size() < 3) throw GeometryError("polygon needs at least 3 corners");
    Floorplan plan;
    for (std::size_t i = 0; i < corners.size(); ++i) {
        const Vec2& a = corners[i];
        const Vec2& b = corners[(i + 1) % corners.size()];
        plan.walls.push_back(Wall::from_endpoints(a, b));
    }
    plan.polygon = std::move(corners);
    return plan;
}

Vec2 mirror_point(const Vec2& p, const Wall& w)
{
    if (w.length() < kEps) throw GeometryError("degenerate wall of zero length");
    const Vec2 d = w.direction();
    const Vec2 v = p - w.endpoint_a;
    return w.endpoint_a + 2.0 * v.dot(d) * d - v;
}

double effective_wall_angle(std::span<const Wall> sequence)
{
    double nu = 0.0;
    double sign = 1.0;
    for (const Wall& w : sequence) {
        nu += sign * w.angle;
        sign = -sign;
    }
    return nu;
}

std::vector<VirtualAnchor> build_vas(const Vec2& node_position, int parent,
                                     const Floorplan& plan, int q_max)
{
    if (q_max < 0) throw GeometryError("q_max must be non-negative");
    std::vector<VirtualAnchor> vas;
    vas.push_back(VirtualAnchor{node_position, parent, {}, 0, 0.0});

    std::size_t level_begin = 0;
    for (int q = 1; q <= q_max; ++q) {
        const std::size_t level_end = vas.size();
        for (std::size_t i = level_begin; i < level_end; ++i) {
            for (int wi = 0; wi < static_cast<int>(plan.walls.size()); ++wi) {
                const VirtualAnchor& base = vas[i];
                if (!base.wall_sequence.empty() && base.wall_sequence.back() == wi) continue;
                VirtualAnchor va;
                va.position = mirror_point(base.position, plan.walls[wi]);
                va.parent = parent;
                va.wall_sequence = base.wall_sequence;
                va.wall_sequence.push_back(wi);
                va.order = q;
                const double sign = (q % 2 == 1) ? 1.0 : -1.0;
                va.effective_angle = base.effective_angle + sign * plan.walls[wi].angle;
                vas.push_back(std::move(va));
            }
        }
        level_begin = level_end;
    }
    return vas;
}

std::optional<std::vector<Vec2>> reflection_path(const Vec2& agent, const VirtualAnchor& va,
                                                 const Floorplan& plan)
{
    const int q_max = va.order;
    // Intermediate mirror images v_q of the anchor after the first q walls;
    // recovered by peeling the involution off the final VA position.
    std::vector<Vec2> images(q_max + 1);
    images[q_max] = va.position;
    for (int q = q_max; q >= 1; --q)
        images[q - 1] = mirror_point(images[q], plan.walls[va.wall_sequence[q - 1]]);

    std::vector<Vec2> path(q_max + 2);
    path.front() = images[0];
    path.back() = agent;

    Vec2 cur = agent;
    for (int q = q_max; q >= 1; --q) {
        const Wall& w = plan.walls[va.wall_sequence[q - 1]];
        const Vec2 r = images[q] - cur;
        auto hit = intersect_params(cur, r, w.endpoint_a, w.endpoint_b - w.endpoint_a);
        if (!hit) return std::nullopt;
        const auto [t, u] = *hit;
        const double u_eps = kEps / w.length();
        if (t <= 0.0 || t >= 1.0 || u <= u_eps || u >= 1.0 - u_eps) return std::nullopt;
        cur = w.endpoint_a + u * (w.endpoint_b - w.endpoint_a);
        path[q] = cur;
    }
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        if (segment_blocked(path[i], path[i + 1], plan)) return std::nullopt;
    return path;
}

}  // namespace peb
