#include "simloc/noise.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace simloc::noise {

NoiseProfile make_noise_profile(const TileMatrix& areas, double n0, double sigma_i2) {
    if (!(sigma_i2 >= 0.0)) throw std::invalid_argument("noise profile: sigma_i2 must be >= 0");
    if (!(n0 >= 0.0)) throw std::invalid_argument("noise profile: n0 must be >= 0");
    if (areas.size() == 0) throw std::invalid_argument("noise profile: empty area matrix");
    NoiseProfile profile{sigma_i2, n0, areas, TileMatrix(areas.n_w(), areas.n_d())};
    auto a = areas.flat();
    auto s2 = profile.sigma_s2.flat();
    for (std::size_t t = 0; t < a.size(); ++t) {
        if (!(a[t] > 0.0)) throw std::invalid_argument("noise profile: tile area must be > 0");
        s2[t] = n0 / a[t];
    }
    return profile;
}

NoiseProfile build_noise_profile(const geometry::CameraRig& rig, const TileGrid& grid, double n0, double sigma_i2) {
    return make_noise_profile(geometry::grid_tile_areas(grid, rig), n0, sigma_i2);
}

double ssnr(const NoiseProfile& profile, double sigma2, std::size_t k, std::size_t j) {
    if (profile.n0 == 0.0) return std::numeric_limits<double>::infinity();
    return sigma2 * profile.areas(k, j) / profile.n0;
}

double ssnr_closed_form(const geometry::CameraRig& rig, const TileGrid& grid, double sigma2, double n0,
                        std::size_t j) {
    if (n0 == 0.0) return std::numeric_limits<double>::infinity();
    const double s = grid.side_cm;
    const double c = std::cos(rig.theta_rad);
    const double hs = rig.height_cm * std::sin(rig.theta_rad);
    const double near = static_cast<double>(j) * s * c + hs;
    const double far = static_cast<double>(j + 1) * s * c + hs;
    return sigma2 * rig.focal_cm * rig.focal_cm * rig.height_cm / (2.0 * n0 * c) *
           (s / (near * near) - s / (far * far));
}

double sinr(double sigma2, double sigma_i2) {
    if (sigma_i2 == 0.0) return std::numeric_limits<double>::infinity();
    return sigma2 / sigma_i2;
}

double to_db(double ratio) { return 10.0 * std::log10(ratio); }
double from_db(double db) { return std::pow(10.0, db / 10.0); }

double intrinsic_variance_for_sinr_db(double sigma2, double sinr_db) { return sigma2 / from_db(sinr_db); }

WeightMatrix gip2d_weights(const NoiseProfile& profile) {
    WeightMatrix w(profile.n_w(), profile.n_d());
    auto s2 = profile.sigma_s2.flat();
    auto out = w.flat();
    for (std::size_t t = 0; t < out.size(); ++t) {
        const double denom = 2.0 * profile.sigma_i2 + s2[t];
        if (!(denom > 0.0)) throw std::invalid_argument("gip2d_weights: zero noise variance (sigma_i2 = 0 and n0 = 0)");
        out[t] = 1.0 / denom;
    }
    return w;
}

WeightMatrix gip1d_weights(const NoiseProfile& profile) {
    if (!(profile.n0 > 0.0)) throw std::invalid_argument("gip1d_weights: n0 must be > 0");
    WeightMatrix w(profile.n_w(), profile.n_d());
    auto a = profile.areas.flat();
    auto out = w.flat();
    for (std::size_t t = 0; t < out.size(); ++t) out[t] = a[t] / profile.n0;
    return w;
}

WeightMatrix unit_weights(const NoiseProfile& profile) { return WeightMatrix(profile.n_w(), profile.n_d(), 1.0); }

}  // namespace simloc::noise
