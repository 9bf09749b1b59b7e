#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "simloc/geometry.hpp"
#include "simloc/match_ip.hpp"
#include "simloc/match_mi.hpp"
#include "simloc/noise.hpp"
#include "simloc/rng.hpp"
#include "simloc/scene.hpp"

namespace simloc::sim {

enum class Algorithm { Sip, Gip1d, Gip2d, Nmi, Enmi1d, Enmi2d };

std::string_view to_string(Algorithm a);
/// Accepts the display name in any case ("GIP2D", "gip2d").
std::optional<Algorithm> parse_algorithm(std::string_view name);
bool is_ip(Algorithm a);

std::vector<Algorithm> ip_family();
std::vector<Algorithm> mi_family();

struct SimConfig {
    geometry::CameraRig rig = geometry::CameraRig::from_degrees(60.0, 36.0, 0.0367);
    TileGrid grid{};
    scene::ScenePrior prior{};  // alpha is taken from the sweep point, not from here
    scene::ValueAlphabet alphabet{};
    std::size_t l_count = 2;
    double sigma_i2 = 0.0;
    std::vector<double> n0_grid{2.5e-5};
    std::vector<double> alpha_grid{0.0};
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    std::vector<Algorithm> algorithms = ip_family();
    bool quantize_ip = false;
    match_mi::MiOptions mi{};
    unsigned threads = 1;  // 0 = one per hardware thread

    void validate() const;
};

struct PointParams {
    double n0 = 0.0;
    double alpha = 0.0;
};

struct TrialOutcome {
    std::size_t true_index = 0;
    std::vector<std::size_t> chosen;  // parallel to SimConfig::algorithms
    std::vector<bool> errors;

    bool operator==(const TrialOutcome&) const = default;
};

struct CurvePoint {
    std::string sweep_param;  // "n0" or "alpha"
    double param_value = 0.0;
    std::vector<Algorithm> algorithms;
    std::vector<std::uint64_t> error_counts;
    std::uint64_t trials = 0;

    double rate(std::size_t i) const {
        return static_cast<double>(error_counts[i]) / static_cast<double>(trials);
    }
    std::optional<double> rate_of(Algorithm a) const;
};

/// Everything a trial needs that depends only on the sweep point.
class PointContext {
public:
    PointContext(const SimConfig& cfg, const PointParams& point);

    const NoiseProfile& profile() const { return profile_; }
    const PointParams& point() const { return point_; }
    const WeightMatrix& weights(Algorithm a) const;

private:
    PointParams point_;
    NoiseProfile profile_;
    std::vector<std::pair<Algorithm, WeightMatrix>> weights_;
};

/// One draw of the localization problem: L scenes, their map sections and a capture of the true one.
struct Realization {
    std::vector<SceneMatrix> scenes;
    std::size_t true_index = 0;
    std::vector<TiledImage> map_sections;
    TiledImage capture;
};

/// Draws the true index and all noise for the given scenes.
Realization realize(const SimConfig& cfg, const PointContext& ctx, std::vector<SceneMatrix> scenes,
                    RandomStream& rng);

/// Runs every configured algorithm on the same realization.
TrialOutcome evaluate(const SimConfig& cfg, const PointContext& ctx, const Realization& r);

TrialOutcome run_trial(const SimConfig& cfg, const PointContext& ctx, RandomStream& rng);
TrialOutcome run_trial(const SimConfig& cfg, const PointParams& point, RandomStream& rng);

/// Error counts over cfg.trials trials, each on its own substream of (seed, point_index, trial).
/// The result does not depend on cfg.threads.
CurvePoint estimate_pe(const SimConfig& cfg, const PointParams& point, std::uint64_t point_index,
                       std::string sweep_param = "n0");

/// One point per entry of cfg.n0_grid, alpha fixed at 0.
std::vector<CurvePoint> sweep_noise(const SimConfig& cfg);

/// One point per entry of cfg.alpha_grid at the single n0 in cfg.n0_grid.
std::vector<CurvePoint> sweep_alpha(const SimConfig& cfg);

// Presets reproducing the published experiment grids.
struct Preset {
    std::string name;
    std::string sweep;  // "n0" or "alpha"
    double sinr_db = 0.0;
    std::vector<Algorithm> algorithms;
    std::vector<double> n0_grid;
    std::vector<double> alpha_grid;
};

std::vector<double> log_grid(double start, std::size_t count, double decades_per_step = 0.2);
std::vector<double> correlation_grid();
/// N0 giving sigma_a^2 / N0 = 45 dB for the default prior.
double correlated_scene_n0(double sigma_a2 = 25.0);

std::optional<Preset> find_preset(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace simloc::sim
