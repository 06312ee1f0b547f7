#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "peb/evaluate.hpp"
#include "peb/io.hpp"
#include "peb/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitInvalid = 3;
constexpr int kExitWrite = 4;

struct Overrides {
    double pulse = 0.0;       // seconds; 0 = keep config
    double spacing = 0.0;     // m
    int q_max = -1;
    std::string model;
    double sample_fraction = 0.0;
};

int default_threads()
{
    if (const char* env = std::getenv("PEB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void apply_overrides(peb::ScenarioConfig& cfg, const Overrides& ov)
{
    if (ov.pulse > 0.0) cfg.signal.pulse_duration_s = ov.pulse;
    if (ov.spacing > 0.0) cfg.grid_spacing = ov.spacing;
    if (ov.q_max >= 0) cfg.q_max = ov.q_max;
    if (ov.sample_fraction > 0.0) cfg.signal.sample_fraction = ov.sample_fraction;
    if (ov.model == "full") cfg.model = peb::OverlapModel::full;
    if (ov.model == "no-overlap") cfg.model = peb::OverlapModel::no_overlap;
}

// Loads + validates; on failure prints the report and returns an exit code.
int load_checked(const std::string& path, const Overrides& ov, peb::ScenarioConfig& cfg)
{
    try {
        cfg = peb::load_scenario(path);
    } catch (const peb::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    }
    apply_overrides(cfg, ov);
    const auto problems = peb::validate_scenario(cfg);
    if (!problems.empty()) {
        for (const auto& p : problems) std::cerr << "invalid: " << p << '\n';
        return kExitInvalid;
    }
    return kExitOk;
}

int write_file(const std::string& path, const std::function<void(std::ostream&)>& writer)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open '" << path << "' for writing\n";
        return kExitWrite;
    }
    writer(out);
    out.flush();
    if (!out) {
        std::cerr << "error: write to '" << path << "' failed\n";
        return kExitWrite;
    }
    return kExitOk;
}

peb::ProgressFn make_progress(bool quiet)
{
    if (quiet) return {};
    return [](std::size_t done, std::size_t total) {
        std::cout << "processed " << done << "/" << total << " points\n" << std::flush;
    };
}

std::vector<peb::Vec2> default_ellipse_points(const peb::ScenarioConfig& cfg)
{
    // 5x4 probe positions over the bounding box, keeping valid ones
    std::vector<peb::Vec2> pts;
    const peb::GridSpec grid = peb::make_grid(cfg.plan, cfg.grid_spacing);
    const double w = grid.nx * grid.spacing;
    const double h = grid.ny * grid.spacing;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 4; ++j) {
            const peb::Vec2 p = grid.origin +
                peb::Vec2((i + 0.5) * w / 5.0, (j + 0.5) * h / 4.0);
            if (cfg.plan.contains(p) && cfg.plan.wall_distance(p) >= cfg.wall_margin)
                pts.push_back(p);
        }
    return pts;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multipath-assisted indoor positioning error bounds"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string raster_path;
    Overrides ov;
    int threads = default_threads();
    bool quiet = false;

    CLI::AsNumberWithUnit pulse_unit(
        std::map<std::string, double>{{"ps", 1e-12}, {"ns", 1e-9}, {"us", 1e-6}, {"s", 1.0}});

    auto add_common = [&](CLI::App* cmd, bool with_eval_opts) {
        cmd->add_option("config", config_path, "scenario config file (JSON)")->required();
        if (with_eval_opts) {
            cmd->add_option("--pulse", ov.pulse, "pulse duration override, e.g. 0.5ns")
                ->transform(pulse_unit);
            cmd->add_option("--spacing", ov.spacing, "grid spacing override [m]");
            cmd->add_option("--qmax", ov.q_max, "maximum VA order override");
            cmd->add_option("--model", ov.model, "overlap model override")
                ->check(CLI::IsMember({"full", "no-overlap"}));
            cmd->add_option("--sample-fraction", ov.sample_fraction,
                            "samples per pulse duration (T_p / T_s)");
            cmd->add_option("--threads", threads, "worker thread count");
            cmd->add_flag("--quiet", quiet, "suppress progress output");
        }
    };

    CLI::App* validate = app.add_subcommand("validate", "check a scenario config");
    add_common(validate, false);

    CLI::App* vas = app.add_subcommand("vas", "dump virtual anchors as CSV");
    add_common(vas, false);
    vas->add_option("-o,--output", out_path, "output CSV path")->required();
    vas->add_option("--qmax", ov.q_max, "maximum VA order override");

    CLI::App* map_cmd = app.add_subcommand("map", "PEB map over the floorplan grid");
    add_common(map_cmd, true);
    map_cmd->add_option("-o,--output", out_path, "output CSV path")->required();
    map_cmd->add_option("--raster", raster_path, "optional log10-PEB PGM raster path");

    CLI::App* cdf_cmd = app.add_subcommand("cdf", "empirical CDF of the PEB map");
    add_common(cdf_cmd, true);
    cdf_cmd->add_option("-o,--output", out_path, "output CSV path")->required();

    CLI::App* ell_cmd = app.add_subcommand("ellipses", "error ellipses at sample points");
    add_common(ell_cmd, true);
    ell_cmd->add_option("-o,--output", out_path, "output CSV path")->required();
    double ellipse_scale = 0.0;
    ell_cmd->add_option("--scale", ellipse_scale, "standard-deviation scale factor");

    CLI11_PARSE(app, argc, argv);

    peb::ScenarioConfig cfg;
    if (int rc = load_checked(config_path, ov, cfg); rc != kExitOk) return rc;

    if (validate->parsed()) {
        std::cout << "scenario '" << peb::to_string(cfg.type) << "': " << cfg.anchors.size()
                  << " anchor(s), " << cfg.agents.size() << " agent(s), q_max=" << cfg.q_max
                  << ", model=" << peb::to_string(cfg.model) << "\nok\n";
        return kExitOk;
    }
    if (vas->parsed())
        return write_file(out_path, [&](std::ostream& o) { peb::write_va_csv(o, cfg); });

    if (map_cmd->parsed() || cdf_cmd->parsed()) {
        const peb::PebMap map = peb::peb_map(cfg, threads, make_progress(quiet));
        if (map_cmd->parsed()) {
            int rc = write_file(out_path, [&](std::ostream& o) { peb::write_map_csv(o, map); });
            if (rc != kExitOk) return rc;
            if (!raster_path.empty())
                rc = write_file(raster_path, [&](std::ostream& o) {
                    peb::write_raster_pgm(o, map, cfg.raster_log_min, cfg.raster_log_max);
                });
            return rc;
        }
        const peb::CdfResult cdf = peb_cdf(map);
        return write_file(out_path, [&](std::ostream& o) { peb::write_cdf_csv(o, cdf); });
    }

    if (ell_cmd->parsed()) {
        const double scale = ellipse_scale > 0.0 ? ellipse_scale : cfg.ellipse_scale;
        std::vector<peb::Vec2> pts =
            cfg.ellipse_points.empty() ? default_ellipse_points(cfg) : cfg.ellipse_points;
        const peb::EllipseSamples samples = peb::ellipse_samples(cfg, pts, scale);
        for (const peb::Vec2& p : samples.skipped)
            std::cerr << "warning: singular information at (" << p.x() << ", " << p.y()
                      << "), ellipse omitted\n";
        return write_file(out_path,
                          [&](std::ostream& o) { peb::write_ellipses_csv(o, samples); });
    }
    return kExitOk;
}
