#include "simloc/match_mi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace simloc::match_mi {

namespace {

constexpr double kTruncationSigmas = 6.0;
constexpr double kNormTolerance = 1e-9;

// Probability that N(0,1) falls in [lo, hi]; either bound may be infinite.
double standard_normal_mass(double lo, double hi) {
    // Work in the tail where both bounds sit on the same side to avoid cancellation.
    if (lo >= 0.0) return 0.5 * (std::erfc(lo / std::numbers::sqrt2) - std::erfc(hi / std::numbers::sqrt2));
    if (hi <= 0.0) return 0.5 * (std::erfc(-hi / std::numbers::sqrt2) - std::erfc(-lo / std::numbers::sqrt2));
    return 1.0 - 0.5 * std::erfc(-lo / std::numbers::sqrt2) - 0.5 * std::erfc(hi / std::numbers::sqrt2);
}

TilePosterior point_mass(int level) { return {level, {1.0}}; }

int checked_level(double v, const scene::ValueAlphabet& alphabet, const char* what) {
    if (!(v >= 0.0 && v <= alphabet.max_level()) || std::floor(v) != v)
        throw std::invalid_argument(std::string(what) + ": value " + std::to_string(v) +
                                    " is not a level of the alphabet");
    return static_cast<int>(v);
}

int bin_count(const scene::ValueAlphabet& alphabet, const MiOptions& options) {
    if (options.bin_width < 1) throw std::invalid_argument("MiOptions: bin_width must be >= 1");
    return (alphabet.levels + options.bin_width - 1) / options.bin_width;
}

TilePosterior to_bins(TilePosterior p, int bin_width) {
    if (bin_width == 1) return p;
    const int lo = p.support_lo() / bin_width;
    const int hi = p.support_hi() / bin_width;
    TilePosterior binned{lo, std::vector<double>(static_cast<std::size_t>(hi - lo + 1), 0.0)};
    for (std::size_t i = 0; i < p.probs.size(); ++i)
        binned.probs[static_cast<std::size_t>((p.offset + static_cast<int>(i)) / bin_width - lo)] += p.probs[i];
    return binned;
}

// Sums per-tile outer products into a joint whose window is the union of all supports.
EmpiricalJoint accumulate(const std::vector<TilePosterior>& rows, const std::vector<TilePosterior>& cols, int bins) {
    int row_lo = std::numeric_limits<int>::max(), row_hi = -1;
    int col_lo = std::numeric_limits<int>::max(), col_hi = -1;
    for (const auto& p : rows) {
        row_lo = std::min(row_lo, p.support_lo());
        row_hi = std::max(row_hi, p.support_hi());
    }
    for (const auto& p : cols) {
        col_lo = std::min(col_lo, p.support_lo());
        col_hi = std::max(col_hi, p.support_hi());
    }
    EmpiricalJoint joint(bins, row_lo, row_hi, col_lo, col_hi);
    // Unit mass per tile; normalize() then divides by the tile count, which keeps pair counts exact.
    for (std::size_t t = 0; t < rows.size(); ++t)
        joint.add_outer(rows[t].offset, rows[t].probs, cols[t].offset, cols[t].probs);
    return joint;
}

std::vector<TilePosterior> quantized_posteriors(const TiledImage& img, const scene::ValueAlphabet& alphabet,
                                                int bin_width, const char* what) {
    std::vector<TilePosterior> out;
    out.reserve(img.size());
    for (double v : img.flat()) out.push_back(to_bins(point_mass(checked_level(v, alphabet, what)), bin_width));
    return out;
}

std::vector<TilePosterior> gaussian_posteriors(const TiledImage& img, const TileMatrix* extra_variance,
                                               double base_variance, const scene::ValueAlphabet& alphabet,
                                               int bin_width) {
    std::vector<TilePosterior> out;
    out.reserve(img.size());
    auto values = img.flat();
    for (std::size_t t = 0; t < values.size(); ++t) {
        const double var = base_variance + (extra_variance ? extra_variance->flat()[t] : 0.0);
        out.push_back(to_bins(discretize_gaussian(values[t], var, alphabet), bin_width));
    }
    return out;
}

}  // namespace

std::string_view to_string(MiVariant v) {
    switch (v) {
        case MiVariant::Nmi: return "NMI";
        case MiVariant::Enmi1d: return "ENMI1D";
        case MiVariant::Enmi2d: return "ENMI2D";
    }
    return "?";
}

double TilePosterior::mass(int level) const {
    if (level < support_lo() || level > support_hi()) return 0.0;
    return probs[static_cast<std::size_t>(level - offset)];
}

std::vector<double> TilePosterior::dense(int levels) const {
    std::vector<double> out(static_cast<std::size_t>(levels), 0.0);
    for (std::size_t i = 0; i < probs.size(); ++i) out[static_cast<std::size_t>(offset) + i] = probs[i];
    return out;
}

TilePosterior discretize_gaussian(double mean, double variance, const scene::ValueAlphabet& alphabet) {
    alphabet.validate();
    if (!(variance >= 0.0)) throw std::invalid_argument("discretize_gaussian: variance must be >= 0");
    if (!std::isfinite(mean)) throw std::invalid_argument("discretize_gaussian: mean must be finite");
    const int top = alphabet.max_level();
    if (variance == 0.0) return point_mass(static_cast<int>(scene::quantize_value(mean, alphabet)));

    const double sd = std::sqrt(variance);
    const double lo_f = std::max(0.0, std::ceil(mean - kTruncationSigmas * sd));
    const double hi_f = std::min(static_cast<double>(top), std::floor(mean + kTruncationSigmas * sd));
    if (lo_f > hi_f) return point_mass(static_cast<int>(scene::quantize_value(mean, alphabet)));

    const int lo = static_cast<int>(lo_f);
    const int hi = static_cast<int>(hi_f);
    constexpr double inf = std::numeric_limits<double>::infinity();
    TilePosterior p{lo, std::vector<double>(static_cast<std::size_t>(hi - lo + 1))};
    double sum = 0.0;
    for (int i = lo; i <= hi; ++i) {
        const double edge_lo = (i == 0) ? -inf : (i - 0.5 - mean) / sd;
        const double edge_hi = (i == top) ? inf : (i + 0.5 - mean) / sd;
        const double m = standard_normal_mass(edge_lo, edge_hi);
        p.probs[static_cast<std::size_t>(i - lo)] = m;
        sum += m;
    }
    if (!(sum > 0.0)) return point_mass(static_cast<int>(scene::quantize_value(mean, alphabet)));
    for (double& m : p.probs) m /= sum;
    return p;
}

EmpiricalJoint::EmpiricalJoint(int bins) : EmpiricalJoint(bins, 0, bins - 1, 0, bins - 1) {}

EmpiricalJoint::EmpiricalJoint(int bins, int row_lo, int row_hi, int col_lo, int col_hi)
    : bins_(bins), row_lo_(row_lo), col_lo_(col_lo), rows_(row_hi - row_lo + 1), cols_(col_hi - col_lo + 1) {
    if (bins < 1) throw std::invalid_argument("EmpiricalJoint: need at least one bin");
    if (row_lo < 0 || col_lo < 0 || row_hi >= bins || col_hi >= bins || rows_ < 1 || cols_ < 1)
        throw std::invalid_argument("EmpiricalJoint: window outside the table");
    cells_.assign(static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_), 0.0);
}

double EmpiricalJoint::at(int row, int col) const {
    if (!inside(row, col)) return 0.0;
    return cells_[static_cast<std::size_t>(row - row_lo_) * static_cast<std::size_t>(cols_) +
                  static_cast<std::size_t>(col - col_lo_)];
}

void EmpiricalJoint::add(int row, int col, double mass) {
    if (!inside(row, col)) throw std::out_of_range("EmpiricalJoint::add: cell outside the window");
    if (!(mass >= 0.0)) throw std::invalid_argument("EmpiricalJoint::add: negative mass");
    cells_[static_cast<std::size_t>(row - row_lo_) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(col - col_lo_)] += mass;
    normalized_ = false;
}

void EmpiricalJoint::add_outer(int row_offset, std::span<const double> row_probs, int col_offset,
                               std::span<const double> col_probs, double scale) {
    const int r_end = row_offset + static_cast<int>(row_probs.size()) - 1;
    const int c_end = col_offset + static_cast<int>(col_probs.size()) - 1;
    if (!inside(row_offset, col_offset) || !inside(r_end, c_end))
        throw std::out_of_range("EmpiricalJoint::add_outer: support outside the window");
    for (std::size_t r = 0; r < row_probs.size(); ++r) {
        const double pr = scale * row_probs[r];
        if (pr == 0.0) continue;
        double* dst = cells_.data() + static_cast<std::size_t>(row_offset + static_cast<int>(r) - row_lo_) *
                                          static_cast<std::size_t>(cols_) +
                      static_cast<std::size_t>(col_offset - col_lo_);
        for (std::size_t c = 0; c < col_probs.size(); ++c) dst[c] += pr * col_probs[c];
    }
    normalized_ = false;
}

double EmpiricalJoint::total() const {
    double s = 0.0;
    for (double v : cells_) s += v;
    return s;
}

void EmpiricalJoint::normalize() {
    const double s = total();
    if (!(s > 0.0)) throw std::domain_error("EmpiricalJoint::normalize: no mass");
    for (double& v : cells_) v /= s;
    normalized_ = true;
}

std::vector<double> EmpiricalJoint::row_marginal() const {
    std::vector<double> m(static_cast<std::size_t>(bins_), 0.0);
    for (int r = 0; r < rows_; ++r) {
        double s = 0.0;
        for (int c = 0; c < cols_; ++c) s += cells_[static_cast<std::size_t>(r * cols_ + c)];
        m[static_cast<std::size_t>(row_lo_ + r)] = s;
    }
    return m;
}

std::vector<double> EmpiricalJoint::col_marginal() const {
    std::vector<double> m(static_cast<std::size_t>(bins_), 0.0);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) m[static_cast<std::size_t>(col_lo_ + c)] += cells_[static_cast<std::size_t>(r * cols_ + c)];
    return m;
}

EmpiricalJoint EmpiricalJoint::transposed() const {
    EmpiricalJoint t(bins_, col_lo_, col_lo_ + cols_ - 1, row_lo_, row_lo_ + rows_ - 1);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c)
            t.cells_[static_cast<std::size_t>(c * rows_ + r)] = cells_[static_cast<std::size_t>(r * cols_ + c)];
    t.normalized_ = normalized_;
    return t;
}

std::vector<double> EmpiricalJoint::dense() const {
    std::vector<double> d(static_cast<std::size_t>(bins_) * static_cast<std::size_t>(bins_), 0.0);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c)
            d[static_cast<std::size_t>(row_lo_ + r) * static_cast<std::size_t>(bins_) +
              static_cast<std::size_t>(col_lo_ + c)] = cells_[static_cast<std::size_t>(r * cols_ + c)];
    return d;
}

EmpiricalJoint joint_nmi(const TiledImage& yq, const TiledImage& ylq, const scene::ValueAlphabet& alphabet,
                         const MiOptions& options) {
    require_same_shape(yq, ylq, "joint_nmi");
    const int bins = bin_count(alphabet, options);
    EmpiricalJoint joint = accumulate(quantized_posteriors(yq, alphabet, options.bin_width, "joint_nmi"),
                                      quantized_posteriors(ylq, alphabet, options.bin_width, "joint_nmi"), bins);
    joint.normalize();
    return joint;
}

EmpiricalJoint joint_enmi2d(const TiledImage& y, const TiledImage& y_l, const NoiseProfile& profile,
                            const scene::ValueAlphabet& alphabet, const MiOptions& options) {
    require_same_shape(y, y_l, "joint_enmi2d");
    require_same_shape(y, profile.areas, "joint_enmi2d");
    const int bins = bin_count(alphabet, options);
    EmpiricalJoint joint =
        accumulate(gaussian_posteriors(y, &profile.sigma_s2, profile.sigma_i2, alphabet, options.bin_width),
                   gaussian_posteriors(y_l, nullptr, profile.sigma_i2, alphabet, options.bin_width), bins);
    joint.normalize();
    return joint;
}

EmpiricalJoint joint_enmi1d(const TiledImage& y, const TiledImage& ylq, const NoiseProfile& profile,
                            const scene::ValueAlphabet& alphabet, const MiOptions& options) {
    require_same_shape(y, ylq, "joint_enmi1d");
    require_same_shape(y, profile.areas, "joint_enmi1d");
    const int bins = bin_count(alphabet, options);
    EmpiricalJoint joint =
        accumulate(gaussian_posteriors(y, &profile.sigma_s2, profile.sigma_i2, alphabet, options.bin_width),
                   quantized_posteriors(ylq, alphabet, options.bin_width, "joint_enmi1d"), bins);
    joint.normalize();
    return joint;
}

double entropy(std::span<const double> dist) {
    double total = 0.0;
    double h = 0.0;
    for (double p : dist) {
        if (p < 0.0) throw std::invalid_argument("entropy: negative mass");
        total += p;
        if (p > 0.0) h -= p * std::log2(p);
    }
    if (std::abs(total - 1.0) > kNormTolerance) throw std::invalid_argument("entropy: distribution is not normalized");
    return std::max(h, 0.0);
}

double entropy(const EmpiricalJoint& joint) { return entropy(joint.window()); }

double mi_score(const EmpiricalJoint& joint) {
    const double h_joint = entropy(joint);
    if (h_joint == 0.0) return 2.0;
    return (entropy(joint.row_marginal()) + entropy(joint.col_marginal())) / h_joint;
}

std::vector<double> mi_scores(const TiledImage& y, std::span<const TiledImage> candidates, MiVariant variant,
                              const NoiseProfile& profile, const scene::ValueAlphabet& alphabet,
                              const MiOptions& options) {
    if (candidates.empty()) throw std::invalid_argument("classify_mi: empty candidate list");
    require_same_shape(y, profile.areas, "classify_mi");
    const int bins = bin_count(alphabet, options);
    const int bw = options.bin_width;

    // The captured-side posteriors are shared by every candidate.
    std::vector<TilePosterior> captured;
    if (variant == MiVariant::Nmi)
        captured = quantized_posteriors(scene::quantize(y, alphabet), alphabet, bw, "classify_mi");
    else
        captured = gaussian_posteriors(y, &profile.sigma_s2, profile.sigma_i2, alphabet, bw);

    std::vector<double> scores;
    scores.reserve(candidates.size());
    for (const TiledImage& cand : candidates) {
        require_same_shape(y, cand, "classify_mi");
        std::vector<TilePosterior> map_side;
        if (variant == MiVariant::Enmi2d)
            map_side = gaussian_posteriors(cand, nullptr, profile.sigma_i2, alphabet, bw);
        else
            map_side = quantized_posteriors(scene::quantize(cand, alphabet), alphabet, bw, "classify_mi");
        EmpiricalJoint joint = accumulate(captured, map_side, bins);
        joint.normalize();
        scores.push_back(mi_score(joint));
    }
    return scores;
}

std::size_t classify_mi(const TiledImage& y, std::span<const TiledImage> candidates, MiVariant variant,
                        const NoiseProfile& profile, const scene::ValueAlphabet& alphabet,
                        const MiOptions& options) {
    const std::vector<double> scores = mi_scores(y, candidates, variant, profile, alphabet, options);
    std::size_t best = 0;
    for (std::size_t l = 1; l < scores.size(); ++l)
        if (scores[l] > scores[best]) best = l;
    return best;
}

}  // namespace simloc::match_mi
