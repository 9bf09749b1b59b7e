#pragma once

#include <span>
#include <string_view>

#include "simloc/noise.hpp"

namespace simloc::match_ip {

enum class IpVariant { Sip, Gip1d, Gip2d };

std::string_view to_string(IpVariant v);

/// Sum over tiles of w (y - y_l)^2.
double weighted_distance_sq(const TiledImage& y, const TiledImage& y_l, const WeightMatrix& w);

/// Weight matrix a variant uses for the given profile.
WeightMatrix weights_for(IpVariant variant, const NoiseProfile& profile);

/// Index (zero-based) of the candidate at the smallest weighted distance; ties go to the lowest index.
std::size_t classify_with_weights(const TiledImage& y, std::span<const TiledImage> candidates, const WeightMatrix& w);

std::size_t classify_ip(const TiledImage& y, std::span<const TiledImage> candidates, IpVariant variant,
                        const NoiseProfile& profile);

}  // namespace simloc::match_ip
