// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion (with indented detail
// lines underneath) and exits non-zero if any criterion fails.

#include <unistd.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "simloc/config.hpp"
#include "simloc/geometry.hpp"
#include "simloc/match_ip.hpp"
#include "simloc/match_mi.hpp"
#include "simloc/noise.hpp"
#include "simloc/sim_harness.hpp"

using namespace simloc;
namespace fs = std::filesystem;

namespace {

struct Report {
    bool pass = true;
    std::vector<std::string> lines;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        lines.push_back(std::string(ok ? "ok    " : "FAIL  ") + what);
    }
    void note(const std::string& what) { lines.push_back("      " + what); }
};

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---- shared simulation setup ---------------------------------------------------------------

sim::SimConfig preset_config(const std::string& name, std::uint64_t seed = 1) {
    config::ConfigSources src;
    src.preset = name;
    config::ResolvedConfig r = config::resolve(src);
    r.sim.seed = seed;
    r.sim.threads = 0;
    return r.sim;
}

void expect_rate(Report& rep, const sim::CurvePoint& cp, sim::Algorithm a, double target, double tol,
                 const std::string& where) {
    const double got = *cp.rate_of(a);
    rep.check(std::abs(got - target) <= tol, fmt("%s %-6s = %.4f (target %.3f +/- %.3f)", where.c_str(),
                                                 std::string(sim::to_string(a)).c_str(), got, target, tol));
}

void expect_at_most(Report& rep, const sim::CurvePoint& cp, sim::Algorithm a, double bound, const std::string& where) {
    const double got = *cp.rate_of(a);
    rep.check(got <= bound, fmt("%s %-6s = %.4f (bound <= %.3f)", where.c_str(),
                                std::string(sim::to_string(a)).c_str(), got, bound));
}

// a <= b + slack
void expect_order(Report& rep, const sim::CurvePoint& cp, sim::Algorithm a, sim::Algorithm b, double slack,
                  const std::string& where) {
    const double ra = *cp.rate_of(a), rb = *cp.rate_of(b);
    rep.check(ra <= rb + slack, fmt("%s %s %.4f <= %s %.4f + %.2f", where.c_str(),
                                    std::string(sim::to_string(a)).c_str(), ra,
                                    std::string(sim::to_string(b)).c_str(), rb, slack));
}

// ---- 1. geometry ---------------------------------------------------------------------------

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

Report criterion_geometry() {
    Report rep;
    std::vector<double> gx, gw;
    gauss_legendre(16, gx, gw);
    const auto t0 = Clock::now();
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> uh(10.0, 300.0), ut(2.0, 85.0), uf(0.005, 0.2), ux(-200.0, 200.0),
        uy(0.0, 500.0), uwid(0.1, 60.0);
    double worst = 0.0;
    for (int n = 0; n < 100; ++n) {
        const auto rig = geometry::CameraRig::from_degrees(uh(gen), ut(gen), uf(gen));
        const double xl = ux(gen), yl = uy(gen);
        const geometry::TileRect t{xl, xl + uwid(gen), yl, yl + uwid(gen)};
        // Composite tensor-product Gauss-Legendre over the rectangle.
        const int panels = 8;
        double quad = 0.0;
        const double hx = (t.x_upper - t.x_lower) / panels, hy = (t.y_upper - t.y_lower) / panels;
        for (int px = 0; px < panels; ++px)
            for (int py = 0; py < panels; ++py)
                for (std::size_t i = 0; i < gx.size(); ++i)
                    for (std::size_t j = 0; j < gx.size(); ++j) {
                        const double y = t.y_lower + hy * (py + 0.5 * (gx[j] + 1.0));
                        quad += gw[i] * gw[j] * 0.25 * hx * hy * std::abs(geometry::jacobian_det(y, rig));
                    }
        const double closed = geometry::tile_area_focal(t, rig);
        worst = std::max(worst, std::abs(closed - quad) / quad);
    }
    const double elapsed = seconds_since(t0);
    rep.check(worst <= 1e-6, fmt("max relative error %.3g over 100 random (rig, tile) pairs (<= 1e-6)", worst));
    rep.check(elapsed < 1.0, fmt("runtime %.3f s (< 1 s)", elapsed));
    return rep;
}

// ---- 2 and 3. fig6 -------------------------------------------------------------------------

std::vector<sim::CurvePoint> fig6_curve() {
    static const std::vector<sim::CurvePoint> curve = sim::sweep_noise(preset_config("fig6"));
    return curve;
}

const sim::CurvePoint& point_near(const std::vector<sim::CurvePoint>& curve, double value) {
    const sim::CurvePoint* best = &curve.front();
    for (const auto& cp : curve)
        if (std::abs(std::log(cp.param_value / value)) < std::abs(std::log(best->param_value / value))) best = &cp;
    return *best;
}

Report criterion_fig6_values() {
    using A = sim::Algorithm;
    Report rep;
    const auto t0 = Clock::now();
    const auto& curve = fig6_curve();
    const auto& lo = point_near(curve, 2.5e-5);
    const auto& mid = point_near(curve, 2.5e-3);
    const auto& hi = point_near(curve, 0.25);
    expect_rate(rep, lo, A::Sip, 0.001, 0.05, "N0=2.5e-5");
    expect_rate(rep, lo, A::Gip2d, 0.001, 0.05, "N0=2.5e-5");
    expect_rate(rep, lo, A::Gip1d, 0.079, 0.05, "N0=2.5e-5");
    expect_rate(rep, mid, A::Sip, 0.311, 0.05, "N0=2.5e-3");
    expect_rate(rep, mid, A::Gip1d, 0.207, 0.05, "N0=2.5e-3");
    expect_rate(rep, mid, A::Gip2d, 0.188, 0.05, "N0=2.5e-3");
    for (A a : sim::ip_family()) expect_rate(rep, hi, a, 0.50, 0.05, "N0=0.25");
    rep.note(fmt("25-point sweep, 10^4 trials per point, %.1f s", seconds_since(t0)));
    return rep;
}

Report criterion_fig6_dominance() {
    Report rep;
    for (const auto& cp : fig6_curve())
        expect_order(rep, cp, sim::Algorithm::Gip2d, sim::Algorithm::Sip, 0.02, fmt("N0=%.3g", cp.param_value));
    return rep;
}

// ---- 4. fig7 -------------------------------------------------------------------------------

Report criterion_fig7() {
    using A = sim::Algorithm;
    Report rep;
    const auto t0 = Clock::now();
    sim::SimConfig cfg = preset_config("fig7");
    cfg.alpha_grid = {0.5, 0.9, 0.99};
    const auto curve = sim::sweep_alpha(cfg);
    expect_rate(rep, curve[0], A::Sip, 0.147, 0.05, "alpha=0.5");
    expect_rate(rep, curve[0], A::Gip1d, 0.123, 0.05, "alpha=0.5");
    expect_rate(rep, curve[0], A::Gip2d, 0.067, 0.05, "alpha=0.5");
    for (const auto& cp : curve) {
        const std::string where = fmt("alpha=%.2f", cp.param_value);
        expect_order(rep, cp, A::Gip2d, A::Gip1d, 0.02, where);
        expect_order(rep, cp, A::Gip1d, A::Sip, 0.02, where);
    }
    rep.note(fmt("N0 = %.4g (45 dB), %.1f s", cfg.n0_grid.front(), seconds_since(t0)));
    return rep;
}

// ---- 5. fig8 -------------------------------------------------------------------------------

Report criterion_fig8() {
    using A = sim::Algorithm;
    Report rep;
    const auto t0 = Clock::now();
    sim::SimConfig cfg = preset_config("fig8");
    cfg.n0_grid = {2.5e-5, 2.5e-3, 2.5e-7};
    const auto curve = sim::sweep_noise(cfg);
    expect_rate(rep, curve[0], A::Nmi, 0.131, 0.05, "N0=2.5e-5");
    expect_at_most(rep, curve[0], A::Enmi1d, 0.01, "N0=2.5e-5");
    expect_at_most(rep, curve[0], A::Enmi2d, 0.005, "N0=2.5e-5");
    expect_rate(rep, curve[1], A::Nmi, 0.480, 0.05, "N0=2.5e-3");
    expect_rate(rep, curve[1], A::Enmi1d, 0.404, 0.05, "N0=2.5e-3");
    expect_rate(rep, curve[1], A::Enmi2d, 0.343, 0.05, "N0=2.5e-3");
    const double e1 = *curve[2].rate_of(A::Enmi1d), nmi = *curve[2].rate_of(A::Nmi);
    rep.check(e1 > nmi, fmt("N0=2.5e-7 crossover ENMI1D %.4f > NMI %.4f (published 0.126 > 0.057)", e1, nmi));
    expect_at_most(rep, curve[2], A::Enmi2d, 0.005, "N0=2.5e-7");
    rep.note(fmt("%.1f s", seconds_since(t0)));
    return rep;
}

// ---- 6. fig9 -------------------------------------------------------------------------------

Report criterion_fig9() {
    using A = sim::Algorithm;
    Report rep;
    const auto t0 = Clock::now();
    const auto curve = sim::sweep_alpha(preset_config("fig9"));
    const auto& half = *std::min_element(curve.begin(), curve.end(), [](const auto& a, const auto& b) {
        return std::abs(a.param_value - 0.5) < std::abs(b.param_value - 0.5);
    });
    expect_rate(rep, half, A::Nmi, 0.442, 0.05, "alpha=0.5");
    expect_rate(rep, half, A::Enmi1d, 0.253, 0.05, "alpha=0.5");
    expect_rate(rep, half, A::Enmi2d, 0.155, 0.05, "alpha=0.5");
    for (const auto& cp : curve) {
        const std::string where = fmt("alpha=%.2f", cp.param_value);
        expect_order(rep, cp, A::Enmi2d, A::Enmi1d, 0.02, where);
        expect_order(rep, cp, A::Enmi1d, A::Nmi, 0.02, where);
    }
    rep.note(fmt("23-point sweep, %.1f s", seconds_since(t0)));
    return rep;
}

// ---- 7. degeneracy -------------------------------------------------------------------------

Report criterion_degeneracy() {
    Report rep;
    std::mt19937_64 gen(77);
    const scene::ValueAlphabet alphabet{256};
    const NoiseProfile silent = noise::make_noise_profile(TileMatrix(6, 11, 1e-4), 0.0, 0.0);
    std::uniform_int_distribution<int> centre(20, 235), spread(1, 20);
    double worst = 0.0;
    for (int n = 0; n < 1000; ++n) {
        const int c = centre(gen), s = spread(gen);
        std::uniform_int_distribution<int> level(c - s, c + s);
        TiledImage a(6, 11), b(6, 11);
        for (double& v : a.flat()) v = level(gen);
        for (double& v : b.flat()) v = level(gen);
        const double nmi = match_mi::mi_score(match_mi::joint_nmi(a, b, alphabet));
        const double e1 = match_mi::mi_score(match_mi::joint_enmi1d(a, b, silent, alphabet));
        const double e2 = match_mi::mi_score(match_mi::joint_enmi2d(a, b, silent, alphabet));
        worst = std::max({worst, std::abs(nmi - e1), std::abs(nmi - e2)});
    }
    rep.check(worst <= 1e-12, fmt("NMI / ENMI1D / ENMI2D max score gap %.3g on 1000 pairs (<= 1e-12)", worst));

    // Equal focal areas make all three weightings proportional to the unit weights.
    std::uniform_real_distribution<double> ua(1e-6, 1e-3), un0(1e-6, 1.0), us(0.0, 20.0);
    std::uniform_int_distribution<int> lcount(2, 5);
    std::normal_distribution<double> pix(128.0, 5.0);
    int disagreements = 0;
    for (int n = 0; n < 1000; ++n) {
        const NoiseProfile p = noise::make_noise_profile(TileMatrix(6, 11, ua(gen)), un0(gen), us(gen));
        TiledImage y(6, 11);
        for (double& v : y.flat()) v = pix(gen);
        std::vector<TiledImage> cands(static_cast<std::size_t>(lcount(gen)), TiledImage(6, 11));
        for (auto& c : cands)
            for (double& v : c.flat()) v = pix(gen);
        const auto s = match_ip::classify_ip(y, cands, match_ip::IpVariant::Sip, p);
        const auto g1 = match_ip::classify_ip(y, cands, match_ip::IpVariant::Gip1d, p);
        const auto g2 = match_ip::classify_ip(y, cands, match_ip::IpVariant::Gip2d, p);
        if (s != g1 || s != g2) ++disagreements;
    }
    rep.check(disagreements == 0, fmt("SIP / GIP1D / GIP2D disagree on %d of 1000 equal-weight instances", disagreements));
    return rep;
}

// ---- 8. exhaustive properties --------------------------------------------------------------

Report criterion_properties() {
    Report rep;
    const scene::ValueAlphabet tiny{3}, wide{256};
    std::vector<TiledImage> images;
    for (int code = 0; code < 81; ++code) {
        TiledImage img(2, 2);
        int c = code;
        for (double& v : img.flat()) {
            v = c % 3;
            c /= 3;
        }
        images.push_back(img);
    }
    int table_mismatch = 0, out_of_range = 0, positive_entropy = 0;
    double worst_shift = 0.0;
    for (const auto& a : images)
        for (const auto& b : images) {
            const auto joint = match_mi::joint_nmi(a, b, tiny);
            int counts[3][3] = {};
            for (std::size_t t = 0; t < 4; ++t) ++counts[int(a.flat()[t])][int(b.flat()[t])];
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c)
                    if (joint.at(r, c) != counts[r][c] / 4.0) ++table_mismatch;
            if (match_mi::entropy(joint) > 0.0) {
                ++positive_entropy;
                const double s = match_mi::mi_score(joint);
                if (!(s >= 1.0 - 1e-12 && s <= 2.0 + 1e-12)) ++out_of_range;
            }
            TiledImage as = a, bs = b;
            for (double& v : as.flat()) v += 100.0;
            for (double& v : bs.flat()) v += 100.0;
            worst_shift = std::max(worst_shift, std::abs(match_mi::mi_score(match_mi::joint_nmi(a, b, wide)) -
                                                         match_mi::mi_score(match_mi::joint_nmi(as, bs, wide))));
        }
    rep.check(table_mismatch == 0, fmt("joint tables vs pair counting: %d mismatching cells over 6561 pairs", table_mismatch));
    rep.check(out_of_range == 0,
              fmt("score outside [1, 2]: %d of %d pairs with positive joint entropy", out_of_range, positive_entropy));
    rep.check(worst_shift <= 1e-12, fmt("shift by +100: max score change %.3g", worst_shift));

    const NoiseProfile p = noise::make_noise_profile(TileMatrix(2, 2, 1e-4), 0.0, 0.0);
    int changed = 0, decisions = 0;
    for (const auto& y : images) {
        TiledImage ys = y;
        for (double& v : ys.flat()) v += 37.0;
        for (std::size_t i = 0; i < images.size(); ++i)
            for (std::size_t j = 0; j < images.size(); ++j) {
                const std::vector<TiledImage> c = {images[i], images[j]};
                std::vector<TiledImage> cs = c;
                for (auto& m : cs)
                    for (double& v : m.flat()) v += 37.0;
                ++decisions;
                if (match_mi::classify_mi(y, c, match_mi::MiVariant::Nmi, p, wide) !=
                    match_mi::classify_mi(ys, cs, match_mi::MiVariant::Nmi, p, wide))
                    ++changed;
            }
    }
    rep.check(changed == 0, fmt("shift by +37: chosen index changed in %d of %d decisions", changed, decisions));
    return rep;
}

// ---- 9. reproducibility --------------------------------------------------------------------

Report criterion_reproducibility() {
    Report rep;
#ifndef SIMLOC_CLI_PATH
    rep.check(false, "CLI path not compiled in");
#else
    const fs::path dir = fs::temp_directory_path() / ("simloc_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto run = [&](const std::string& name, const std::string& threads) {
        const fs::path out = dir / name;
        const std::string cmd = std::string("\"") + SIMLOC_CLI_PATH + "\" sweep-noise --preset fig6 --seed 42 --threads " +
                                threads + " --out \"" + out.string() + "\"";
        const int rc = std::system(cmd.c_str());
        std::ifstream in(out, std::ios::binary);
        std::string bytes{std::istreambuf_iterator<char>(in), {}};
        return std::pair{rc, bytes};
    };
    const auto a = run("a.csv", "1");
    const auto b = run("b.csv", "1");
    const auto c = run("c.csv", "4");
    rep.check(a.first == 0 && b.first == 0 && c.first == 0, "three CLI runs exited 0");
    rep.check(!a.second.empty() && a.second == b.second, fmt("repeat run byte-identical (%zu bytes)", a.second.size()));
    rep.check(a.second == c.second, "1 thread vs 4 threads byte-identical");
    fs::remove_all(dir);
#endif
    return rep;
}

// ---- 10. posterior discretization ---------------------------------------------------------

double normal_cdf(double x) { return 0.5 * (1.0 + std::erf(x / std::sqrt(2.0))); }

Report criterion_discretization() {
    Report rep;
    const scene::ValueAlphabet alphabet{256};
    std::mt19937_64 gen(10);
    std::uniform_real_distribution<double> um(-20.0, 275.0), ulog(std::log(0.05), std::log(60.0));
    double worst = 0.0, worst_sum = 0.0;
    for (int n = 0; n < 1000; ++n) {
        const double mean = um(gen), sd = std::exp(ulog(gen));
        const auto p = match_mi::discretize_gaussian(mean, sd * sd, alphabet);
        std::vector<double> oracle(256, 0.0);
        const int lo = std::max(0, static_cast<int>(std::ceil(mean - 6.0 * sd)));
        const int hi = std::min(255, static_cast<int>(std::floor(mean + 6.0 * sd)));
        if (lo > hi) {
            oracle[static_cast<std::size_t>(scene::quantize_value(mean, alphabet))] = 1.0;
        } else {
            double total = 0.0;
            for (int i = lo; i <= hi; ++i) {
                const double upper = i == 255 ? 1.0 : normal_cdf((i + 0.5 - mean) / sd);
                const double lower = i == 0 ? 0.0 : normal_cdf((i - 0.5 - mean) / sd);
                oracle[i] = upper - lower;
                total += oracle[i];
            }
            for (double& v : oracle) v /= total;
        }
        const auto dense = p.dense(256);
        for (int i = 0; i < 256; ++i) worst = std::max(worst, std::abs(dense[i] - oracle[i]));
        worst_sum = std::max(worst_sum, std::abs(std::accumulate(p.probs.begin(), p.probs.end(), 0.0) - 1.0));
    }
    rep.check(worst <= 1e-9, fmt("max |mass - CDF-difference oracle| %.3g over 1000 (mean, sd) pairs (<= 1e-9)", worst));
    rep.check(worst_sum <= 1e-9, fmt("max |sum - 1| %.3g (<= 1e-9)", worst_sum));
    return rep;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Report()>>> criteria = {
        {"1  geometry oracle", criterion_geometry},
        {"2  noise sweep, inner-product family", criterion_fig6_values},
        {"3  noise sweep, GIP2D dominates SIP", criterion_fig6_dominance},
        {"4  correlation sweep, inner-product family", criterion_fig7},
        {"5  noise sweep, mutual-information family", criterion_fig8},
        {"6  correlation sweep, mutual-information family", criterion_fig9},
        {"7  degeneracy suite", criterion_degeneracy},
        {"8  exhaustive property suite", criterion_properties},
        {"9  reproducibility", criterion_reproducibility},
        {"10 posterior discretization", criterion_discretization},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Report rep;
        try {
            rep = run();
        } catch (const std::exception& e) {
            rep.check(false, std::string("exception: ") + e.what());
        }
        if (!rep.pass) ++failed;
        std::cout << (rep.pass ? "PASS  " : "FAIL  ") << name << '\n';
        for (const auto& l : rep.lines) std::cout << "        " << l << '\n';
        std::cout.flush();
    }
    std::cout << (criteria.size() - failed) << " of " << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
