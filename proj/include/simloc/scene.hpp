#pragma once

#include "simloc/rng.hpp"
#include "simloc/tile_matrix.hpp"

namespace simloc {
struct NoiseProfile;
}

namespace simloc::scene {

/// Discrete value set {0, ..., levels-1}.
struct ValueAlphabet {
    int levels = 256;

    void validate() const {
        if (levels < 2) throw std::invalid_argument("ValueAlphabet: need at least 2 levels");
    }
    int max_level() const { return levels - 1; }
};

/// Tile amplitude prior. alpha = 0 gives i.i.d. tiles; alpha > 0 correlates tiles along j.
struct ScenePrior {
    double mu = 128.0;
    double sigma_a = 5.0;
    double alpha = 0.0;

    void validate() const;
};

/// Draws a_{k,j}. Each row k is a stationary AR-1 sequence along j with mean mu and variance sigma_a^2.
SceneMatrix generate_scene(const TileGrid& grid, const ScenePrior& prior, RandomStream& rng);

/// Map section Y^l = A + N^{i,l}; sigma_i is the intrinsic standard deviation.
TiledImage make_map_section(const SceneMatrix& a, double sigma_i, RandomStream& rng);

struct CaptureNoise {
    TileMatrix intrinsic;
    TileMatrix sensor;
};

/// Independent intrinsic and per-tile sensor noise draws for one capture.
CaptureNoise draw_capture_noise(const NoiseProfile& profile, RandomStream& rng);

/// Captured image Y = A + N^i + N^s with Var(N^s_{k,j}) = N0 / area_{k,j}.
TiledImage sense_capture(const SceneMatrix& a, const NoiseProfile& profile, RandomStream& rng);

/// Rounds half away from zero, then clamps into the alphabet.
double quantize_value(double value, const ValueAlphabet& alphabet);
TiledImage quantize(const TiledImage& img, const ValueAlphabet& alphabet);

}  // namespace simloc::scene
