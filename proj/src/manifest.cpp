#include "simloc/manifest.hpp"

#include <chrono>
#include <ctime>

#include "json.hpp"

#ifndef SIMLOC_VERSION
#define SIMLOC_VERSION "0.0.0"
#endif

namespace simloc {

std::string tool_version() { return SIMLOC_VERSION; }

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

RunManifest RunManifest::make(std::string command, const config::ResolvedConfig& cfg, std::string output_path) {
    return {std::move(command), cfg.values, cfg.preset, std::move(output_path), simloc::tool_version(), utc_timestamp(),
            cfg.sim.sigma_i2, cfg.sim.l_count, cfg.sim.alphabet.levels, cfg.sim.mi.bin_width, cfg.sim.threads};
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json algs = nlohmann::ordered_json::array();
    for (auto a : values.algorithms) algs.push_back(std::string(sim::to_string(a)));
    nlohmann::ordered_json j;
    j["command"] = command;
    j["preset"] = preset;
    j["seed"] = values.seed;
    j["output"] = output_path;
    j["tool_version"] = tool_version;
    j["timestamp"] = timestamp;
    j["threads"] = threads;
    j["config"] = {
        {"h_cm", values.h_cm},       {"theta_deg", values.theta_deg}, {"f_cm", values.f_cm},
        {"s_cm", values.s_cm},       {"n_w", values.n_w},             {"n_d", values.n_d},
        {"mu", values.mu},           {"sigma_a", values.sigma_a},     {"sinr_db", values.sinr_db},
        {"n0", values.n0},           {"alpha", values.alpha},         {"trials", values.trials},
        {"seed", values.seed},       {"algorithms", algs},            {"quantize_ip", values.quantize_ip},
    };
    j["derived"] = {{"sigma_i2", sigma_i2}, {"l_count", l_count}, {"alphabet_levels", alphabet_levels}, {"mi_bin_width", mi_bin_width}};
    return j.dump(2) + "\n";
}

}  // namespace simloc
