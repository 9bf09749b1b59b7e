#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "simloc/noise.hpp"
#include "simloc/scene.hpp"

namespace simloc::match_mi {

enum class MiVariant { Nmi, Enmi1d, Enmi2d };

std::string_view to_string(MiVariant v);

/// Discrete distribution over the alphabet stored as a contiguous support window.
struct TilePosterior {
    int offset = 0;             // level of probs[0]
    std::vector<double> probs;  // nonnegative, sums to 1

    double mass(int level) const;
    int support_lo() const { return offset; }
    int support_hi() const { return offset + static_cast<int>(probs.size()) - 1; }
    std::vector<double> dense(int levels) const;
};

/// Bins the Gaussian N(mean, variance) onto the alphabet. Interior level i receives the mass of
/// [i - 0.5, i + 0.5); the first and last levels absorb the tails. Levels farther than 6 standard
/// deviations from the mean are dropped and the rest renormalized. Zero variance gives a point mass
/// at the quantized mean.
TilePosterior discretize_gaussian(double mean, double variance, const scene::ValueAlphabet& alphabet);

/// Joint mass over (captured value, map value). Storage covers a rectangular window of the
/// bins x bins table; cells outside the window are zero.
class EmpiricalJoint {
public:
    explicit EmpiricalJoint(int bins);
    EmpiricalJoint(int bins, int row_lo, int row_hi, int col_lo, int col_hi);

    int bins() const { return bins_; }
    double at(int row, int col) const;
    void add(int row, int col, double mass);
    /// Adds scale * row_probs (x) col_probs with row_probs[0] at row_offset and col_probs[0] at col_offset.
    void add_outer(int row_offset, std::span<const double> row_probs, int col_offset, std::span<const double> col_probs,
                   double scale = 1.0);

    double total() const;
    void normalize();
    bool normalized() const { return normalized_; }

    std::vector<double> row_marginal() const;  // captured-image axis
    std::vector<double> col_marginal() const;  // map axis
    EmpiricalJoint transposed() const;

    /// Dense bins x bins copy, row-major.
    std::vector<double> dense() const;

    int row_lo() const { return row_lo_; }
    int row_hi() const { return row_lo_ + rows_ - 1; }
    int col_lo() const { return col_lo_; }
    int col_hi() const { return col_lo_ + cols_ - 1; }
    std::span<const double> window() const { return cells_; }

private:
    bool inside(int row, int col) const {
        return row >= row_lo_ && row < row_lo_ + rows_ && col >= col_lo_ && col < col_lo_ + cols_;
    }

    int bins_;
    int row_lo_ = 0;
    int col_lo_ = 0;
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> cells_;
    bool normalized_ = false;
};

struct MiOptions {
    /// Alphabet levels merged per histogram bin. 1 keeps the full alphabet.
    int bin_width = 1;
};

/// Pair-counting joint of two quantized images, normalized by the tile count.
EmpiricalJoint joint_nmi(const TiledImage& yq, const TiledImage& ylq, const scene::ValueAlphabet& alphabet,
                         const MiOptions& options = {});

/// Per tile, the outer product of the captured posterior N(y, sigma_i^2 + sigma_s^2) and the map
/// posterior N(y_l, sigma_i^2); normalized by the tile count.
EmpiricalJoint joint_enmi2d(const TiledImage& y, const TiledImage& y_l, const NoiseProfile& profile,
                            const scene::ValueAlphabet& alphabet, const MiOptions& options = {});

/// Per tile, the captured posterior N(y, sigma_i^2 + sigma_s^2) placed in the column of the
/// quantized map value; normalized by the tile count.
EmpiricalJoint joint_enmi1d(const TiledImage& y, const TiledImage& ylq, const NoiseProfile& profile,
                            const scene::ValueAlphabet& alphabet, const MiOptions& options = {});

/// Shannon entropy in bits; input must sum to 1 within 1e-9.
double entropy(std::span<const double> dist);
double entropy(const EmpiricalJoint& joint);

/// (H[rows] + H[cols]) / H[joint]; 2.0 when the joint entropy is zero.
double mi_score(const EmpiricalJoint& joint);

/// Score of every candidate under the variant. Inputs follow the variant's quantization rule:
/// NMI quantizes both images, ENMI-1D only the map, ENMI-2D neither.
std::vector<double> mi_scores(const TiledImage& y, std::span<const TiledImage> candidates, MiVariant variant,
                              const NoiseProfile& profile, const scene::ValueAlphabet& alphabet,
                              const MiOptions& options = {});

/// Zero-based index of the highest-scoring candidate; ties go to the lowest index.
std::size_t classify_mi(const TiledImage& y, std::span<const TiledImage> candidates, MiVariant variant,
                        const NoiseProfile& profile, const scene::ValueAlphabet& alphabet,
                        const MiOptions& options = {});

}  // namespace simloc::match_mi
