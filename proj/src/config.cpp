#include "simloc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace simloc::config {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
    throw ConfigError(ConfigErrorKind::BadValue, "config: key '" + key + "' has value '" + value + "', expected " + expected);
}

double to_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out)) bad_value(key, value, "a finite number");
    return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) bad_value(key, value, "a non-negative integer");
    return out;
}

std::vector<double> to_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    for (const auto& item : split_list(value)) out.push_back(to_double(key, item));
    if (out.empty()) bad_value(key, value, "a comma-separated list of numbers");
    return out;
}

bool to_bool(const std::string& key, const std::string& value) {
    std::string v = value;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    bad_value(key, value, "a boolean");
}

[[noreturn]] void out_of_range(const std::string& what) {
    throw ConfigError(ConfigErrorKind::OutOfRange, "config: " + what);
}

}  // namespace

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {"h_cm",   "theta_deg", "f_cm",   "s_cm",       "n_w",
                                                  "n_d",    "mu",        "sigma_a", "sinr_db",   "n0",
                                                  "alpha",  "trials",    "seed",   "algorithms", "quantize_ip"};
    return keys;
}

KeyValues parse_key_values(std::istream& in, const std::string& source) {
    KeyValues kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError(ConfigErrorKind::Malformed,
                              source + ":" + std::to_string(line_no) + ": expected 'key = value'");
        std::string key = trim(std::string_view(body).substr(0, eq));
        std::string value = trim(std::string_view(body).substr(eq + 1));
        const auto& keys = known_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError(ConfigErrorKind::UnknownKey,
                              source + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
        kv.emplace_back(std::move(key), std::move(value));
    }
    return kv;
}

KeyValues read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(ConfigErrorKind::MissingFile, "config: cannot open file '" + path + "'");
    return parse_key_values(in, path);
}

void ConfigValues::set(const std::string& key, const std::string& value) {
    if (key == "h_cm") h_cm = to_double(key, value);
    else if (key == "theta_deg") theta_deg = to_double(key, value);
    else if (key == "f_cm") f_cm = to_double(key, value);
    else if (key == "s_cm") s_cm = to_double(key, value);
    else if (key == "n_w") n_w = to_uint(key, value);
    else if (key == "n_d") n_d = to_uint(key, value);
    else if (key == "mu") mu = to_double(key, value);
    else if (key == "sigma_a") sigma_a = to_double(key, value);
    else if (key == "sinr_db") sinr_db = to_double(key, value);
    else if (key == "n0") n0 = to_double_list(key, value);
    else if (key == "alpha") alpha = to_double_list(key, value);
    else if (key == "trials") trials = to_uint(key, value);
    else if (key == "seed") seed = to_uint(key, value);
    else if (key == "quantize_ip") quantize_ip = to_bool(key, value);
    else if (key == "algorithms") {
        std::vector<sim::Algorithm> algs;
        for (const auto& name : split_list(value)) {
            auto a = sim::parse_algorithm(name);
            if (!a) bad_value(key, value, "names from SIP, GIP1D, GIP2D, NMI, ENMI1D, ENMI2D");
            algs.push_back(*a);
        }
        if (algs.empty()) bad_value(key, value, "at least one algorithm");
        algorithms = std::move(algs);
    } else {
        throw ConfigError(ConfigErrorKind::UnknownKey, "config: unknown key '" + key + "'");
    }
}

void ConfigValues::validate() const {
    if (!(h_cm > 0.0)) out_of_range("h_cm must be > 0");
    if (!(theta_deg > 0.0 && theta_deg < 90.0)) out_of_range("theta_deg must lie in (0, 90)");
    if (!(f_cm > 0.0)) out_of_range("f_cm must be > 0");
    if (!(s_cm > 0.0)) out_of_range("s_cm must be > 0");
    if (n_w < 1 || n_d < 1) out_of_range("n_w and n_d must be >= 1");
    if (!(sigma_a >= 0.0)) out_of_range("sigma_a must be >= 0");
    for (double v : n0)
        if (!(v >= 0.0)) out_of_range("n0 values must be >= 0");
    for (double v : alpha)
        if (!(v >= 0.0 && v < 1.0)) out_of_range("alpha values must lie in [0, 1)");
    if (trials < 1) out_of_range("trials must be >= 1");
}

sim::SimConfig ConfigValues::to_sim_config() const {
    validate();
    sim::SimConfig cfg;
    cfg.rig = geometry::CameraRig::from_degrees(h_cm, theta_deg, f_cm);
    cfg.grid = TileGrid{n_w, n_d, s_cm};
    cfg.prior = scene::ScenePrior{mu, sigma_a, 0.0};
    cfg.sigma_i2 = noise::intrinsic_variance_for_sinr_db(sigma_a * sigma_a, sinr_db);
    cfg.n0_grid = n0;
    cfg.alpha_grid = alpha;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.algorithms = algorithms;
    cfg.quantize_ip = quantize_ip;
    return cfg;
}

ResolvedConfig resolve(const ConfigSources& sources) {
    ResolvedConfig out;
    if (sources.env_seed && !sources.env_seed->empty()) out.values.set("seed", *sources.env_seed);
    if (sources.preset) {
        auto preset = sim::find_preset(*sources.preset);
        if (!preset) throw ConfigError(ConfigErrorKind::UnknownPreset, "config: unknown preset '" + *sources.preset + "'");
        out.preset = preset->name;
        out.values.sinr_db = preset->sinr_db;
        out.values.algorithms = preset->algorithms;
        out.values.n0 = preset->n0_grid;
        out.values.alpha = preset->alpha_grid;
    }
    if (sources.file)
        for (const auto& [k, v] : read_config_file(*sources.file)) out.values.set(k, v);
    for (const auto& [k, v] : sources.overrides) out.values.set(k, v);
    out.values.validate();
    out.sim = out.values.to_sim_config();
    return out;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_curve_csv(std::ostream& out, const std::vector<sim::CurvePoint>& curve, std::uint64_t seed) {
    out << kCsvHeader << '\n';
    for (const auto& cp : curve)
        for (std::size_t i = 0; i < cp.algorithms.size(); ++i)
            out << cp.sweep_param << ',' << format_number(cp.param_value) << ',' << sim::to_string(cp.algorithms[i])
                << ',' << format_number(cp.rate(i)) << ',' << cp.trials << ',' << seed << '\n';
}

std::vector<CsvRow> read_curve_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != kCsvHeader)
        throw std::runtime_error("read_curve_csv: missing or unexpected header");
    std::vector<CsvRow> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> f;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(trim(cell));
        if (f.size() != 6) throw std::runtime_error("read_curve_csv: expected 6 fields in '" + line + "'");
        rows.push_back({f[0], std::stod(f[1]), f[2], std::stod(f[3]), std::stoull(f[4]), std::stoull(f[5])});
    }
    return rows;
}

}  // namespace simloc::config
