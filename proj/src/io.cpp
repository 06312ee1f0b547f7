#include "peb/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace peb {

std::string format_value(double v)
{
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_va_csv(std::ostream& out, const ScenarioConfig& config)
{
    out << "anchor_id,va_index,x,y,Q,nu_rad,wall_sequence\n";
    auto dump = [&](const std::string& id, const Vec2& pos) {
        const auto vas = build_vas(pos, 0, config.plan, config.q_max);
        for (std::size_t i = 0; i < vas.size(); ++i) {
            const VirtualAnchor& va = vas[i];
            out << id << ',' << i << ',' << format_value(va.position.x()) << ','
                << format_value(va.position.y()) << ',' << va.order << ','
                << format_value(va.effective_angle) << ',';
            for (std::size_t k = 0; k < va.wall_sequence.size(); ++k) {
                if (k) out << '-';
                out << va.wall_sequence[k];
            }
            out << '\n';
        }
    };
    for (const NodeSpec& a : config.anchors) dump(a.id, a.position);
    if (config.type == ScenarioType::mono || config.type == ScenarioType::coop)
        for (const NodeSpec& a : config.agents) dump(a.id, a.position);
}

void write_map_csv(std::ostream& out, const PebMap& map)
{
    out << "x,y,peb,degenerate\n";
    for (int iy = 0; iy < map.grid.ny; ++iy)
        for (int ix = 0; ix < map.grid.nx; ++ix) {
            const double v = map.at(ix, iy);
            if (std::isnan(v)) continue;  // masked
            const Vec2 p = map.grid.point(ix, iy);
            out << format_value(p.x()) << ',' << format_value(p.y()) << ',' << format_value(v)
                << ',' << int(map.degenerate[static_cast<std::size_t>(iy) * map.grid.nx + ix])
                << '\n';
        }
}

void write_cdf_csv(std::ostream& out, const CdfResult& cdf)
{
    out << "peb,fraction\n";
    for (const auto& [v, f] : cdf.points) out << format_value(v) << ',' << format_value(f) << '\n';
}

void write_ellipses_csv(std::ostream& out, const EllipseSamples& samples)
{
    out << "x,y,a,b,theta\n";
    for (const PointEllipse& pe : samples.ellipses)
        out << format_value(pe.position.x()) << ',' << format_value(pe.position.y()) << ','
            << format_value(pe.ellipse.semi_major) << ',' << format_value(pe.ellipse.semi_minor)
            << ',' << format_value(pe.ellipse.orientation) << '\n';
}

void write_raster_pgm(std::ostream& out, const PebMap& map, double log_min, double log_max)
{
    out << "P2\n" << map.grid.nx << ' ' << map.grid.ny << "\n255\n";
    for (int iy = map.grid.ny - 1; iy >= 0; --iy) {  // top row first
        for (int ix = 0; ix < map.grid.nx; ++ix) {
            const double v = map.at(ix, iy);
            int gray = 0;
            if (!std::isnan(v)) {
                const double l = std::log10(std::max(v, 1e-300));
                const double u = std::clamp((l - log_min) / (log_max - log_min), 0.0, 1.0);
                gray = 255 - static_cast<int>(std::lround(u * 255.0));
            }
            out << gray << (ix + 1 == map.grid.nx ? '\n' : ' ');
        }
    }
}

}  // namespace peb
