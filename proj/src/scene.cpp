#include "simloc/scene.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "simloc/noise.hpp"

namespace simloc::scene {

void ScenePrior::validate() const {
    if (!(sigma_a >= 0.0)) throw std::invalid_argument("ScenePrior: sigma_a must be >= 0");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("ScenePrior: alpha must lie in [0, 1)");
}

SceneMatrix generate_scene(const TileGrid& grid, const ScenePrior& prior, RandomStream& rng) {
    grid.validate();
    prior.validate();
    std::normal_distribution<double> unit(0.0, 1.0);
    const double innovation_scale = std::sqrt(1.0 - prior.alpha * prior.alpha);
    SceneMatrix a = TileMatrix::like(grid);
    for (std::size_t k = 0; k < grid.n_w; ++k) {
        // The recursion runs on zero-mean deviations so mean and variance are stationary for every alpha.
        // With alpha == 0 this consumes draws exactly like an i.i.d. generator.
        double deviation = prior.sigma_a * unit(rng);
        a(k, 0) = prior.mu + deviation;
        for (std::size_t j = 1; j < grid.n_d; ++j) {
            deviation = prior.alpha * deviation + innovation_scale * prior.sigma_a * unit(rng);
            a(k, j) = prior.mu + deviation;
        }
    }
    return a;
}

TiledImage make_map_section(const SceneMatrix& a, double sigma_i, RandomStream& rng) {
    if (!(sigma_i >= 0.0)) throw std::invalid_argument("make_map_section: sigma_i must be >= 0");
    if (sigma_i == 0.0) return a;
    std::normal_distribution<double> unit(0.0, 1.0);
    TiledImage y = a;
    for (double& v : y.flat()) v += sigma_i * unit(rng);
    return y;
}

CaptureNoise draw_capture_noise(const NoiseProfile& profile, RandomStream& rng) {
    std::normal_distribution<double> unit(0.0, 1.0);
    const double sigma_i = std::sqrt(profile.sigma_i2);
    CaptureNoise noise{TileMatrix(profile.n_w(), profile.n_d()), TileMatrix(profile.n_w(), profile.n_d())};
    auto intrinsic = noise.intrinsic.flat();
    auto sensor = noise.sensor.flat();
    auto sensor_var = profile.sigma_s2.flat();
    for (std::size_t t = 0; t < intrinsic.size(); ++t) {
        intrinsic[t] = sigma_i * unit(rng);
        sensor[t] = std::sqrt(sensor_var[t]) * unit(rng);
    }
    return noise;
}

TiledImage sense_capture(const SceneMatrix& a, const NoiseProfile& profile, RandomStream& rng) {
    require_same_shape(a, profile.areas, "sense_capture");
    const CaptureNoise noise = draw_capture_noise(profile, rng);
    TiledImage y = a;
    auto out = y.flat();
    auto ni = noise.intrinsic.flat();
    auto ns = noise.sensor.flat();
    for (std::size_t t = 0; t < out.size(); ++t) out[t] += ni[t] + ns[t];
    return y;
}

double quantize_value(double value, const ValueAlphabet& alphabet) {
    return std::clamp(std::round(value), 0.0, static_cast<double>(alphabet.max_level()));
}

TiledImage quantize(const TiledImage& img, const ValueAlphabet& alphabet) {
    alphabet.validate();
    TiledImage q = img;
    for (double& v : q.flat()) v = quantize_value(v, alphabet);
    return q;
}

}  // namespace simloc::scene
