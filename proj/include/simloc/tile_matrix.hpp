#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace simloc {

/// Road tessellation: n_w tiles across the road, n_d tiles along it, square side s (cm).
struct TileGrid {
    std::size_t n_w = 6;
    std::size_t n_d = 11;
    double side_cm = 20.0;

    void validate() const {
        if (n_w < 1 || n_d < 1) throw std::invalid_argument("TileGrid: n_w and n_d must be >= 1");
        if (!(side_cm > 0.0)) throw std::invalid_argument("TileGrid: tile side must be > 0");
    }
    std::size_t tile_count() const { return n_w * n_d; }
};

/// Dense n_w x n_d matrix indexed by (k, j), zero-based; k runs across the road, j along it.
class TileMatrix {
public:
    TileMatrix() = default;
    TileMatrix(std::size_t n_w, std::size_t n_d, double fill = 0.0)
        : n_w_(n_w), n_d_(n_d), values_(n_w * n_d, fill) {}
    TileMatrix(std::size_t n_w, std::size_t n_d, std::vector<double> values)
        : n_w_(n_w), n_d_(n_d), values_(std::move(values)) {
        if (values_.size() != n_w_ * n_d_)
            throw std::invalid_argument("TileMatrix: value count does not match n_w * n_d");
    }

    static TileMatrix like(const TileGrid& grid, double fill = 0.0) { return {grid.n_w, grid.n_d, fill}; }

    std::size_t n_w() const { return n_w_; }
    std::size_t n_d() const { return n_d_; }
    std::size_t size() const { return values_.size(); }

    double& operator()(std::size_t k, std::size_t j) { return values_[k * n_d_ + j]; }
    double operator()(std::size_t k, std::size_t j) const { return values_[k * n_d_ + j]; }

    std::span<double> flat() { return values_; }
    std::span<const double> flat() const { return values_; }

    bool same_shape(const TileMatrix& other) const { return n_w_ == other.n_w_ && n_d_ == other.n_d_; }
    bool matches(const TileGrid& grid) const { return n_w_ == grid.n_w && n_d_ == grid.n_d; }

    bool operator==(const TileMatrix&) const = default;

private:
    std::size_t n_w_ = 0;
    std::size_t n_d_ = 0;
    std::vector<double> values_;
};

// Role names for the same storage.
using SceneMatrix = TileMatrix;
using TiledImage = TileMatrix;
using WeightMatrix = TileMatrix;

inline void require_same_shape(const TileMatrix& a, const TileMatrix& b, const char* what) {
    if (!a.same_shape(b))
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(a.n_w()) + "x" +
                                    std::to_string(a.n_d()) + " vs " + std::to_string(b.n_w()) + "x" +
                                    std::to_string(b.n_d()) + ")");
}

}  // namespace simloc
