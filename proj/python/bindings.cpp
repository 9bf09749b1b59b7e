#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "simloc/config.hpp"
#include "simloc/geometry.hpp"
#include "simloc/match_ip.hpp"
#include "simloc/match_mi.hpp"
#include "simloc/noise.hpp"
#include "simloc/sim_harness.hpp"

namespace py = pybind11;
using namespace simloc;

namespace {

using Rows = std::vector<std::vector<double>>;

TileMatrix from_rows(const Rows& rows) {
    if (rows.empty() || rows.front().empty()) throw std::invalid_argument("expected a non-empty 2-D list");
    TileMatrix m(rows.size(), rows.front().size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k].size() != m.n_d()) throw std::invalid_argument("ragged 2-D list");
        for (std::size_t j = 0; j < m.n_d(); ++j) m(k, j) = rows[k][j];
    }
    return m;
}

Rows to_rows(const TileMatrix& m) {
    Rows rows(m.n_w(), std::vector<double>(m.n_d()));
    for (std::size_t k = 0; k < m.n_w(); ++k)
        for (std::size_t j = 0; j < m.n_d(); ++j) rows[k][j] = m(k, j);
    return rows;
}

std::vector<TiledImage> images(const std::vector<Rows>& list) {
    std::vector<TiledImage> out;
    for (const auto& r : list) out.push_back(from_rows(r));
    return out;
}

config::ResolvedConfig resolve(const std::optional<std::string>& preset, const py::dict& overrides) {
    config::ConfigSources src;
    src.preset = preset;
    for (const auto& [k, v] : overrides) {
        std::string value;
        if (py::isinstance<py::list>(v) || py::isinstance<py::tuple>(v)) {
            for (const auto& item : v) value += (value.empty() ? "" : ",") + py::str(item).cast<std::string>();
        } else if (py::isinstance<py::bool_>(v)) {
            value = v.cast<bool>() ? "true" : "false";
        } else {
            value = py::str(v).cast<std::string>();
        }
        src.overrides.emplace_back(py::str(k).cast<std::string>(), value);
    }
    return config::resolve(src);
}

py::list curve_rows(const std::vector<sim::CurvePoint>& curve, std::uint64_t seed) {
    py::list rows;
    for (const auto& cp : curve)
        for (std::size_t i = 0; i < cp.algorithms.size(); ++i) {
            py::dict row;
            row["sweep_param"] = cp.sweep_param;
            row["param_value"] = cp.param_value;
            row["algorithm"] = std::string(sim::to_string(cp.algorithms[i]));
            row["p_error"] = cp.rate(i);
            row["trials"] = cp.trials;
            row["seed"] = seed;
            rows.append(row);
        }
    return rows;
}

py::list run_sweep(bool alpha, const std::optional<std::string>& preset, unsigned threads, int mi_bin_width,
                   const py::dict& overrides) {
    auto cfg = resolve(preset, overrides);
    cfg.sim.threads = threads;
    cfg.sim.mi.bin_width = mi_bin_width;
    std::vector<sim::CurvePoint> curve;
    {
        py::gil_scoped_release release;
        curve = alpha ? sim::sweep_alpha(cfg.sim) : sim::sweep_noise(cfg.sim);
    }
    return curve_rows(curve, cfg.sim.seed);
}

geometry::CameraRig rig_of(double h_cm, double theta_deg, double f_cm) {
    return geometry::CameraRig::from_degrees(h_cm, theta_deg, f_cm);
}

}  // namespace

PYBIND11_MODULE(_simloc, m) {
    m.doc() = "Perspective-aware image-matching localization simulator";

    py::register_exception<config::ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("project_road",
          [](double x_bar, double y_bar, double h_cm, double theta_deg, double f_cm) {
              const auto p = geometry::project_road({x_bar, y_bar}, rig_of(h_cm, theta_deg, f_cm));
              return std::pair{p.x_tilde, p.y_tilde};
          },
          py::arg("x_bar"), py::arg("y_bar"), py::arg("h_cm") = 60.0, py::arg("theta_deg") = 36.0,
          py::arg("f_cm") = 0.0367);
    m.def("jacobian_det",
          [](double y_bar, double h_cm, double theta_deg, double f_cm) {
              return geometry::jacobian_det(y_bar, rig_of(h_cm, theta_deg, f_cm));
          },
          py::arg("y_bar"), py::arg("h_cm") = 60.0, py::arg("theta_deg") = 36.0, py::arg("f_cm") = 0.0367);
    m.def("tile_area_focal",
          [](double x_lower, double x_upper, double y_lower, double y_upper, double h_cm, double theta_deg,
             double f_cm) {
              return geometry::tile_area_focal({x_lower, x_upper, y_lower, y_upper}, rig_of(h_cm, theta_deg, f_cm));
          },
          py::arg("x_lower"), py::arg("x_upper"), py::arg("y_lower"), py::arg("y_upper"), py::arg("h_cm") = 60.0,
          py::arg("theta_deg") = 36.0, py::arg("f_cm") = 0.0367);
    m.def("grid_tile_areas",
          [](std::size_t n_w, std::size_t n_d, double s_cm, double h_cm, double theta_deg, double f_cm) {
              return to_rows(geometry::grid_tile_areas(TileGrid{n_w, n_d, s_cm}, rig_of(h_cm, theta_deg, f_cm)));
          },
          py::arg("n_w") = 6, py::arg("n_d") = 11, py::arg("s_cm") = 20.0, py::arg("h_cm") = 60.0,
          py::arg("theta_deg") = 36.0, py::arg("f_cm") = 0.0367);

    m.def("discretize_gaussian",
          [](double mean, double variance, int levels) {
              const auto p = match_mi::discretize_gaussian(mean, variance, scene::ValueAlphabet{levels});
              return std::pair{p.offset, p.probs};
          },
          py::arg("mean"), py::arg("variance"), py::arg("levels") = 256,
          "Returns (first level, masses) of the binned Gaussian.");

    m.def("classify_ip",
          [](const Rows& y, const std::vector<Rows>& candidates, const std::string& variant, const Rows& areas,
             double n0, double sigma_i2) {
              const auto alg = sim::parse_algorithm(variant);
              if (!alg || !sim::is_ip(*alg)) throw std::invalid_argument("unknown inner-product variant '" + variant + "'");
              const auto v = *alg == sim::Algorithm::Sip     ? match_ip::IpVariant::Sip
                             : *alg == sim::Algorithm::Gip1d ? match_ip::IpVariant::Gip1d
                                                             : match_ip::IpVariant::Gip2d;
              const auto profile = noise::make_noise_profile(from_rows(areas), n0, sigma_i2);
              return match_ip::classify_ip(from_rows(y), images(candidates), v, profile);
          },
          py::arg("y"), py::arg("candidates"), py::arg("variant"), py::arg("areas"), py::arg("n0"),
          py::arg("sigma_i2"));

    m.def("mi_scores",
          [](const Rows& y, const std::vector<Rows>& candidates, const std::string& variant, const Rows& areas,
             double n0, double sigma_i2, int levels, int bin_width) {
              const auto alg = sim::parse_algorithm(variant);
              if (!alg || sim::is_ip(*alg)) throw std::invalid_argument("unknown MI variant '" + variant + "'");
              const auto v = *alg == sim::Algorithm::Nmi      ? match_mi::MiVariant::Nmi
                             : *alg == sim::Algorithm::Enmi1d ? match_mi::MiVariant::Enmi1d
                                                              : match_mi::MiVariant::Enmi2d;
              const auto profile = noise::make_noise_profile(from_rows(areas), n0, sigma_i2);
              return match_mi::mi_scores(from_rows(y), images(candidates), v, profile, scene::ValueAlphabet{levels},
                                         match_mi::MiOptions{bin_width});
          },
          py::arg("y"), py::arg("candidates"), py::arg("variant"), py::arg("areas"), py::arg("n0"),
          py::arg("sigma_i2"), py::arg("levels") = 256, py::arg("bin_width") = 1);

    m.def("sweep_noise",
          [](std::optional<std::string> preset, unsigned threads, int mi_bin_width, py::kwargs kw) {
              return run_sweep(false, preset, threads, mi_bin_width, kw);
          },
          py::arg("preset") = py::none(), py::arg("threads") = 1, py::arg("mi_bin_width") = 1,
          "Misclassification rates versus N0. Extra keyword arguments use the config-file keys.");
    m.def("sweep_alpha",
          [](std::optional<std::string> preset, unsigned threads, int mi_bin_width, py::kwargs kw) {
              return run_sweep(true, preset, threads, mi_bin_width, kw);
          },
          py::arg("preset") = py::none(), py::arg("threads") = 1, py::arg("mi_bin_width") = 1,
          "Misclassification rates versus the AR-1 coefficient.");
    m.def("sweep_csv",
          [](const std::string& kind, std::optional<std::string> preset, unsigned threads, py::kwargs kw) {
              auto cfg = resolve(preset, kw);
              cfg.sim.threads = threads;
              std::vector<sim::CurvePoint> curve;
              {
                  py::gil_scoped_release release;
                  curve = kind == "alpha" ? sim::sweep_alpha(cfg.sim) : sim::sweep_noise(cfg.sim);
              }
              std::ostringstream os;
              config::write_curve_csv(os, curve, cfg.sim.seed);
              return os.str();
          },
          py::arg("kind") = "n0", py::arg("preset") = py::none(), py::arg("threads") = 1);
    m.def("preset_names", &sim::preset_names);
}
