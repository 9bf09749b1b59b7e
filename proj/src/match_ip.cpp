#include "simloc/match_ip.hpp"

#include <stdexcept>

namespace simloc::match_ip {

std::string_view to_string(IpVariant v) {
    switch (v) {
        case IpVariant::Sip: return "SIP";
        case IpVariant::Gip1d: return "GIP1D";
        case IpVariant::Gip2d: return "GIP2D";
    }
    return "?";
}

double weighted_distance_sq(const TiledImage& y, const TiledImage& y_l, const WeightMatrix& w) {
    require_same_shape(y, y_l, "weighted_distance_sq");
    require_same_shape(y, w, "weighted_distance_sq");
    auto a = y.flat();
    auto b = y_l.flat();
    auto ww = w.flat();
    double sum = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        const double d = a[t] - b[t];
        sum += ww[t] * d * d;
    }
    return sum;
}

WeightMatrix weights_for(IpVariant variant, const NoiseProfile& profile) {
    switch (variant) {
        case IpVariant::Sip: return noise::unit_weights(profile);
        case IpVariant::Gip1d: return noise::gip1d_weights(profile);
        case IpVariant::Gip2d: return noise::gip2d_weights(profile);
    }
    throw std::invalid_argument("weights_for: unknown variant");
}

std::size_t classify_with_weights(const TiledImage& y, std::span<const TiledImage> candidates,
                                  const WeightMatrix& w) {
    if (candidates.empty()) throw std::invalid_argument("classify_ip: empty candidate list");
    std::size_t best = 0;
    double best_dist = weighted_distance_sq(y, candidates[0], w);
    for (std::size_t l = 1; l < candidates.size(); ++l) {
        const double d = weighted_distance_sq(y, candidates[l], w);
        if (d < best_dist) {
            best_dist = d;
            best = l;
        }
    }
    return best;
}

std::size_t classify_ip(const TiledImage& y, std::span<const TiledImage> candidates, IpVariant variant,
                        const NoiseProfile& profile) {
    if (candidates.empty()) throw std::invalid_argument("classify_ip: empty candidate list");
    require_same_shape(y, profile.areas, "classify_ip");
    return classify_with_weights(y, candidates, weights_for(variant, profile));
}

}  // namespace simloc::match_ip
