#include "simloc/sim_harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <exception>
#include <random>
#include <stdexcept>
#include <thread>

namespace simloc::sim {

namespace {

constexpr Algorithm kAll[] = {Algorithm::Sip, Algorithm::Gip1d, Algorithm::Gip2d,
                              Algorithm::Nmi, Algorithm::Enmi1d, Algorithm::Enmi2d};

match_ip::IpVariant ip_variant(Algorithm a) {
    switch (a) {
        case Algorithm::Sip: return match_ip::IpVariant::Sip;
        case Algorithm::Gip1d: return match_ip::IpVariant::Gip1d;
        case Algorithm::Gip2d: return match_ip::IpVariant::Gip2d;
        default: throw std::logic_error("not an inner-product algorithm");
    }
}

match_mi::MiVariant mi_variant(Algorithm a) {
    switch (a) {
        case Algorithm::Nmi: return match_mi::MiVariant::Nmi;
        case Algorithm::Enmi1d: return match_mi::MiVariant::Enmi1d;
        case Algorithm::Enmi2d: return match_mi::MiVariant::Enmi2d;
        default: throw std::logic_error("not a mutual-information algorithm");
    }
}

unsigned resolve_threads(unsigned requested, std::size_t trials) {
    unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(trials, 1)));
}

}  // namespace

std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::Sip: return "SIP";
        case Algorithm::Gip1d: return "GIP1D";
        case Algorithm::Gip2d: return "GIP2D";
        case Algorithm::Nmi: return "NMI";
        case Algorithm::Enmi1d: return "ENMI1D";
        case Algorithm::Enmi2d: return "ENMI2D";
    }
    return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
    std::string upper(name);
    for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (Algorithm a : kAll)
        if (to_string(a) == upper) return a;
    return std::nullopt;
}

bool is_ip(Algorithm a) { return a == Algorithm::Sip || a == Algorithm::Gip1d || a == Algorithm::Gip2d; }

std::vector<Algorithm> ip_family() { return {Algorithm::Sip, Algorithm::Gip1d, Algorithm::Gip2d}; }
std::vector<Algorithm> mi_family() { return {Algorithm::Nmi, Algorithm::Enmi1d, Algorithm::Enmi2d}; }

void SimConfig::validate() const {
    rig.validate();
    grid.validate();
    prior.validate();
    alphabet.validate();
    if (l_count < 2) throw std::invalid_argument("SimConfig: need at least 2 candidate sections");
    if (trials < 1) throw std::invalid_argument("SimConfig: trials must be >= 1");
    if (!(sigma_i2 >= 0.0)) throw std::invalid_argument("SimConfig: sigma_i2 must be >= 0");
    if (algorithms.empty()) throw std::invalid_argument("SimConfig: no algorithms selected");
    for (double n0 : n0_grid)
        if (!(n0 >= 0.0) || !std::isfinite(n0)) throw std::invalid_argument("SimConfig: n0 values must be finite and >= 0");
    for (double a : alpha_grid)
        if (!(a >= 0.0 && a < 1.0)) throw std::invalid_argument("SimConfig: alpha values must lie in [0, 1)");
    if (mi.bin_width < 1) throw std::invalid_argument("SimConfig: MI bin width must be >= 1");
}

std::optional<double> CurvePoint::rate_of(Algorithm a) const {
    for (std::size_t i = 0; i < algorithms.size(); ++i)
        if (algorithms[i] == a) return rate(i);
    return std::nullopt;
}

PointContext::PointContext(const SimConfig& cfg, const PointParams& point)
    : point_(point), profile_(noise::build_noise_profile(cfg.rig, cfg.grid, point.n0, cfg.sigma_i2)) {
    for (Algorithm a : cfg.algorithms)
        if (is_ip(a)) weights_.emplace_back(a, match_ip::weights_for(ip_variant(a), profile_));
}

const WeightMatrix& PointContext::weights(Algorithm a) const {
    for (const auto& [alg, w] : weights_)
        if (alg == a) return w;
    throw std::out_of_range("PointContext: no weights for " + std::string(to_string(a)));
}

Realization realize(const SimConfig& cfg, const PointContext& ctx, std::vector<SceneMatrix> scenes,
                    RandomStream& rng) {
    if (scenes.size() < 2) throw std::invalid_argument("realize: need at least 2 scenes");
    Realization r;
    r.scenes = std::move(scenes);
    std::uniform_int_distribution<std::size_t> pick(0, r.scenes.size() - 1);
    r.true_index = pick(rng);
    const double sigma_i = std::sqrt(cfg.sigma_i2);
    r.map_sections.reserve(r.scenes.size());
    for (const SceneMatrix& a : r.scenes) r.map_sections.push_back(scene::make_map_section(a, sigma_i, rng));
    // Fresh intrinsic draw: the capture is taken at a different time than the map.
    r.capture = scene::sense_capture(r.scenes[r.true_index], ctx.profile(), rng);
    return r;
}

TrialOutcome evaluate(const SimConfig& cfg, const PointContext& ctx, const Realization& r) {
    TrialOutcome out;
    out.true_index = r.true_index;
    out.chosen.reserve(cfg.algorithms.size());
    out.errors.reserve(cfg.algorithms.size());

    std::optional<TiledImage> capture_q;
    std::optional<std::vector<TiledImage>> maps_q;
    for (Algorithm a : cfg.algorithms) {
        std::size_t chosen = 0;
        if (is_ip(a)) {
            if (cfg.quantize_ip) {
                if (!capture_q) {
                    capture_q = scene::quantize(r.capture, cfg.alphabet);
                    maps_q.emplace();
                    for (const auto& m : r.map_sections) maps_q->push_back(scene::quantize(m, cfg.alphabet));
                }
                chosen = match_ip::classify_with_weights(*capture_q, *maps_q, ctx.weights(a));
            } else {
                chosen = match_ip::classify_with_weights(r.capture, r.map_sections, ctx.weights(a));
            }
        } else {
            chosen = match_mi::classify_mi(r.capture, r.map_sections, mi_variant(a), ctx.profile(), cfg.alphabet,
                                           cfg.mi);
        }
        out.chosen.push_back(chosen);
        out.errors.push_back(chosen != r.true_index);
    }
    return out;
}

TrialOutcome run_trial(const SimConfig& cfg, const PointContext& ctx, RandomStream& rng) {
    scene::ScenePrior prior = cfg.prior;
    prior.alpha = ctx.point().alpha;
    std::vector<SceneMatrix> scenes;
    scenes.reserve(cfg.l_count);
    for (std::size_t l = 0; l < cfg.l_count; ++l) scenes.push_back(scene::generate_scene(cfg.grid, prior, rng));
    return evaluate(cfg, ctx, realize(cfg, ctx, std::move(scenes), rng));
}

TrialOutcome run_trial(const SimConfig& cfg, const PointParams& point, RandomStream& rng) {
    cfg.validate();
    return run_trial(cfg, PointContext(cfg, point), rng);
}

CurvePoint estimate_pe(const SimConfig& cfg, const PointParams& point, std::uint64_t point_index,
                       std::string sweep_param) {
    cfg.validate();
    const PointContext ctx(cfg, point);
    const std::size_t n_alg = cfg.algorithms.size();
    const unsigned n_threads = resolve_threads(cfg.threads, cfg.trials);

    // Each worker owns a contiguous trial range; counts merge by addition so scheduling cannot
    // change the result.
    std::vector<std::vector<std::uint64_t>> partial(n_threads, std::vector<std::uint64_t>(n_alg, 0));
    std::vector<std::exception_ptr> failures(n_threads);
    auto work = [&](unsigned w) {
        try {
            const std::size_t begin = cfg.trials * w / n_threads;
            const std::size_t end = cfg.trials * (w + 1) / n_threads;
            for (std::size_t t = begin; t < end; ++t) {
                RandomStream rng = trial_stream(cfg.seed, point_index, t);
                const TrialOutcome o = run_trial(cfg, ctx, rng);
                for (std::size_t i = 0; i < n_alg; ++i) partial[w][i] += o.errors[i] ? 1 : 0;
            }
        } catch (...) {
            failures[w] = std::current_exception();
        }
    };
    if (n_threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (unsigned w = 0; w < n_threads; ++w) pool.emplace_back(work, w);
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);

    CurvePoint cp;
    cp.sweep_param = std::move(sweep_param);
    cp.param_value = cp.sweep_param == "alpha" ? point.alpha : point.n0;
    cp.algorithms = cfg.algorithms;
    cp.error_counts.assign(n_alg, 0);
    for (const auto& p : partial)
        for (std::size_t i = 0; i < n_alg; ++i) cp.error_counts[i] += p[i];
    cp.trials = cfg.trials;
    return cp;
}

std::vector<CurvePoint> sweep_noise(const SimConfig& cfg) {
    if (cfg.n0_grid.empty()) throw std::invalid_argument("sweep_noise: empty n0 grid");
    std::vector<CurvePoint> out;
    out.reserve(cfg.n0_grid.size());
    for (std::size_t i = 0; i < cfg.n0_grid.size(); ++i)
        out.push_back(estimate_pe(cfg, {cfg.n0_grid[i], 0.0}, i, "n0"));
    return out;
}

std::vector<CurvePoint> sweep_alpha(const SimConfig& cfg) {
    if (cfg.alpha_grid.empty()) throw std::invalid_argument("sweep_alpha: empty alpha grid");
    if (cfg.n0_grid.size() != 1) throw std::invalid_argument("sweep_alpha: needs exactly one n0 value");
    std::vector<CurvePoint> out;
    out.reserve(cfg.alpha_grid.size());
    for (std::size_t i = 0; i < cfg.alpha_grid.size(); ++i)
        out.push_back(estimate_pe(cfg, {cfg.n0_grid.front(), cfg.alpha_grid[i]}, i, "alpha"));
    return out;
}

std::vector<double> log_grid(double start, std::size_t count, double decades_per_step) {
    std::vector<double> g;
    g.reserve(count);
    for (std::size_t i = 0; i < count; ++i) g.push_back(start * std::pow(10.0, decades_per_step * static_cast<double>(i)));
    return g;
}

std::vector<double> correlation_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 19; ++i) g.push_back(0.05 * i);
    for (double a : {0.96, 0.97, 0.98, 0.99}) g.push_back(a);
    return g;
}

double correlated_scene_n0(double sigma_a2) { return sigma_a2 / std::pow(10.0, 4.5); }

std::optional<Preset> find_preset(std::string_view name) {
    if (name == "fig6") return Preset{"fig6", "n0", 3.0, ip_family(), log_grid(2.5e-5, 25), {0.0}};
    if (name == "fig7") return Preset{"fig7", "alpha", 3.0, ip_family(), {correlated_scene_n0()}, correlation_grid()};
    if (name == "fig8") return Preset{"fig8", "n0", 10.0, mi_family(), log_grid(2.5e-7, 35), {0.0}};
    if (name == "fig9") return Preset{"fig9", "alpha", 10.0, mi_family(), {correlated_scene_n0()}, correlation_grid()};
    return std::nullopt;
}

std::vector<std::string> preset_names() { return {"fig6", "fig7", "fig8", "fig9"}; }

}  // namespace simloc::sim
