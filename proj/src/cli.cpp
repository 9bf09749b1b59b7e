#include "simloc/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "simloc/config.hpp"
#include "simloc/manifest.hpp"

namespace simloc::cli {

namespace {

namespace fs = std::filesystem;

struct CommonOptions {
    std::string preset;
    std::string config_file;
    std::string out;
    unsigned threads = 1;
    int mi_bin_width = 1;
    std::map<std::string, std::string> keys;
};

void add_config_options(CLI::App* cmd, CommonOptions& opts, bool with_simulation) {
    cmd->add_option("--config", opts.config_file, "Configuration file with 'key = value' lines");
    cmd->add_option("--out", opts.out, "Output CSV path");
    if (with_simulation) {
        cmd->add_option("--preset", opts.preset, "Experiment preset: fig6, fig7, fig8, fig9");
        cmd->add_option("--threads", opts.threads, "Worker threads (0 = all cores); does not change results");
        cmd->add_option("--mi-bin-width", opts.mi_bin_width, "Alphabet levels merged per MI histogram bin");
    }
    for (const auto& key : config::known_keys()) {
        std::string dashed = key;
        std::replace(dashed.begin(), dashed.end(), '_', '-');
        std::string names = "--" + key;
        if (dashed != key) names += ",--" + dashed;
        cmd->add_option(names, opts.keys[key], "Override '" + key + "'");
    }
}

config::ResolvedConfig resolve(const CLI::App* cmd, const CommonOptions& opts) {
    config::ConfigSources src;
    if (!opts.preset.empty()) src.preset = opts.preset;
    if (!opts.config_file.empty()) src.file = opts.config_file;
    if (const char* env = std::getenv("SIMLOC_SEED")) src.env_seed = env;
    for (const auto& key : config::known_keys())
        if (cmd->get_option("--" + key)->count() > 0) src.overrides.emplace_back(key, opts.keys.at(key));
    config::ResolvedConfig cfg = config::resolve(src);
    cfg.sim.threads = opts.threads;
    cfg.sim.mi.bin_width = opts.mi_bin_width;
    cfg.sim.validate();
    return cfg;
}

void emit(const std::string& path, const std::string& content, const RunManifest& manifest, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << content;
        return;
    }
    write_file_atomically(path, content);
    try {
        write_file_atomically(path + ".manifest.json", manifest.to_json());
    } catch (...) {
        std::error_code ec;
        fs::remove(path, ec);
        throw;
    }
}

std::string run_sweep(const std::string& command, const config::ResolvedConfig& cfg) {
    const auto curve = command == "sweep-alpha" ? sim::sweep_alpha(cfg.sim) : sim::sweep_noise(cfg.sim);
    std::ostringstream csv;
    config::write_curve_csv(csv, curve, cfg.sim.seed);
    return csv.str();
}

std::string tile_table(const config::ResolvedConfig& cfg) {
    const auto& sim = cfg.sim;
    const double n0 = sim.n0_grid.front();
    const NoiseProfile profile = noise::build_noise_profile(sim.rig, sim.grid, n0, sim.sigma_i2);
    const double sigma2 = sim.prior.sigma_a * sim.prior.sigma_a;
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::ostringstream os;
    os << "k,j,y_lower_cm,y_upper_cm,area_cm2,sigma_s2,ssnr,w_sip,w_gip1d,w_gip2d\n";
    for (std::size_t k = 0; k < sim.grid.n_w; ++k) {
        for (std::size_t j = 0; j < sim.grid.n_d; ++j) {
            const auto rect = geometry::tile_rect(sim.grid, k, j);
            const double area = profile.areas(k, j);
            const double s2 = profile.sigma_s2(k, j);
            const double denom = 2.0 * profile.sigma_i2 + s2;
            os << k + 1 << ',' << j + 1 << ',' << config::format_number(rect.y_lower) << ','
               << config::format_number(rect.y_upper) << ',' << config::format_number(area) << ','
               << config::format_number(s2) << ',' << config::format_number(noise::ssnr(profile, sigma2, k, j)) << ",1,"
               << config::format_number(n0 > 0.0 ? area / n0 : inf) << ','
               << config::format_number(denom > 0.0 ? 1.0 / denom : inf) << '\n';
        }
    }
    return os.str();
}

std::string project_row(const config::ResolvedConfig& cfg, double x_bar, double y_bar) {
    if (!(y_bar >= 0.0)) throw config::ConfigError(config::ConfigErrorKind::OutOfRange, "project: ybar must be >= 0");
    const geometry::FocalPoint fp = geometry::project_road({x_bar, y_bar}, cfg.sim.rig);
    std::ostringstream os;
    os << "x_bar,y_bar,x_tilde,y_tilde,jacobian_det\n"
       << config::format_number(x_bar) << ',' << config::format_number(y_bar) << ','
       << config::format_number(fp.x_tilde) << ',' << config::format_number(fp.y_tilde) << ','
       << config::format_number(geometry::jacobian_det(y_bar, cfg.sim.rig)) << '\n';
    return os.str();
}

}  // namespace

void write_file_atomically(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    try {
        {
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            if (!f) throw std::runtime_error("cannot open '" + tmp + "' for writing");
            f << content;
            f.flush();
            if (!f) throw std::runtime_error("write to '" + tmp + "' failed");
        }
        fs::rename(tmp, path);
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Perspective-aware image-matching localization simulator"};
    app.set_version_flag("--version", tool_version());
    app.require_subcommand(1);

    CommonOptions noise_opts, alpha_opts, tiles_opts, project_opts;
    auto* sweep_noise = app.add_subcommand("sweep-noise", "Misclassification rate versus N0");
    add_config_options(sweep_noise, noise_opts, true);
    auto* sweep_alpha = app.add_subcommand("sweep-alpha", "Misclassification rate versus AR-1 correlation");
    add_config_options(sweep_alpha, alpha_opts, true);
    auto* tiles = app.add_subcommand("tile-areas", "Per-tile focal-plane areas, SSNR and matcher weights");
    add_config_options(tiles, tiles_opts, false);
    auto* project = app.add_subcommand("project", "Project one road point onto the focal plane");
    add_config_options(project, project_opts, false);
    double x_bar = 0.0, y_bar = 0.0;
    project->add_option("--xbar", x_bar, "Lateral road coordinate (cm)")->required();
    project->add_option("--ybar", y_bar, "Longitudinal road coordinate (cm)")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << tool_version() << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "simloc: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        if (sweep_noise->parsed() || sweep_alpha->parsed()) {
            auto* cmd = sweep_noise->parsed() ? sweep_noise : sweep_alpha;
            auto& opts = sweep_noise->parsed() ? noise_opts : alpha_opts;
            const std::string name = cmd->get_name();
            const auto cfg = resolve(cmd, opts);
            const std::string path = opts.out.empty() ? "simloc_" + name + ".csv" : opts.out;
            const std::string csv = run_sweep(name, cfg);
            emit(path, csv, RunManifest::make(name, cfg, path), out);
        } else if (tiles->parsed()) {
            const auto cfg = resolve(tiles, tiles_opts);
            emit(tiles_opts.out, tile_table(cfg), RunManifest::make("tile-areas", cfg, tiles_opts.out), out);
        } else if (project->parsed()) {
            const auto cfg = resolve(project, project_opts);
            emit(project_opts.out, project_row(cfg, x_bar, y_bar), RunManifest::make("project", cfg, project_opts.out),
                 out);
        }
    } catch (const config::ConfigError& e) {
        err << "simloc: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        err << "simloc: invalid configuration: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "simloc: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kOk;
}

}  // namespace simloc::cli
