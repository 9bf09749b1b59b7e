#pragma once

#include "simloc/geometry.hpp"
#include "simloc/tile_matrix.hpp"

namespace simloc {

/// Per-tile noise description shared by the scene generator and the matchers.
struct NoiseProfile {
    double sigma_i2 = 0.0;  // intrinsic variance
    double n0 = 0.0;        // sensor noise spectral density
    TileMatrix areas;       // focal-plane tile areas (cm^2)
    TileMatrix sigma_s2;    // n0 / areas

    std::size_t n_w() const { return areas.n_w(); }
    std::size_t n_d() const { return areas.n_d(); }
};

}  // namespace simloc

namespace simloc::noise {

/// Profile from explicit tile areas. Rejects non-positive areas and negative variances.
NoiseProfile make_noise_profile(const TileMatrix& areas, double n0, double sigma_i2);

NoiseProfile build_noise_profile(const geometry::CameraRig& rig, const TileGrid& grid, double n0, double sigma_i2);

/// Signal-to-sensor-noise ratio of tile (k, j). Infinite when n0 == 0.
double ssnr(const NoiseProfile& profile, double sigma2, std::size_t k, std::size_t j);

/// Expanded form of the SSNR for row j (zero-based) written directly in rig and grid parameters.
double ssnr_closed_form(const geometry::CameraRig& rig, const TileGrid& grid, double sigma2, double n0,
                        std::size_t j);

/// Signal-to-intrinsic-noise ratio. Infinite when sigma_i2 == 0.
double sinr(double sigma2, double sigma_i2);

double to_db(double ratio);
double from_db(double db);

/// Intrinsic variance giving the requested SINR in dB for a signal of variance sigma2.
double intrinsic_variance_for_sinr_db(double sigma2, double sinr_db);

/// w = 1 / (2 sigma_i^2 + N0 / area): the full maximum-likelihood weighting.
WeightMatrix gip2d_weights(const NoiseProfile& profile);

/// w = area / N0: maximum-likelihood weighting when the scene is taken as noiseless.
WeightMatrix gip1d_weights(const NoiseProfile& profile);

WeightMatrix unit_weights(const NoiseProfile& profile);

}  // namespace simloc::noise
