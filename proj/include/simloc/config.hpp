#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "simloc/sim_harness.hpp"

namespace simloc::config {

enum class ConfigErrorKind { MissingFile, Malformed, UnknownKey, BadValue, OutOfRange, UnknownPreset };

class ConfigError : public std::runtime_error {
public:
    ConfigError(ConfigErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ConfigErrorKind kind() const { return kind_; }

private:
    ConfigErrorKind kind_;
};

/// Recognised keys of the `key = value` format, in canonical order.
const std::vector<std::string>& known_keys();

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Parses `key = value` lines; `#` starts a comment. Keys are checked against known_keys().
KeyValues parse_key_values(std::istream& in, const std::string& source = "<input>");
KeyValues read_config_file(const std::string& path);

/// Every tunable in user-facing units (degrees, dB).
struct ConfigValues {
    double h_cm = 60.0;
    double theta_deg = 36.0;
    double f_cm = 0.0367;
    double s_cm = 20.0;
    std::size_t n_w = 6;
    std::size_t n_d = 11;
    double mu = 128.0;
    double sigma_a = 5.0;
    double sinr_db = 3.0;
    std::vector<double> n0{2.5e-5};
    std::vector<double> alpha{0.0};
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    std::vector<sim::Algorithm> algorithms = sim::ip_family();
    bool quantize_ip = false;

    /// Applies one key; throws ConfigError on unknown keys or unparsable values.
    void set(const std::string& key, const std::string& value);
    /// Range checks on the assembled values.
    void validate() const;
    sim::SimConfig to_sim_config() const;
};

struct ResolvedConfig {
    ConfigValues values;
    std::string preset;  // empty when none
    sim::SimConfig sim;
};

struct ConfigSources {
    std::optional<std::string> preset;
    std::optional<std::string> file;
    KeyValues overrides;                 // command-line flags
    std::optional<std::string> env_seed;  // SIMLOC_SEED
};

/// Precedence from lowest to highest: built-in defaults, SIMLOC_SEED, preset, config file, flags.
ResolvedConfig resolve(const ConfigSources& sources);

/// Shortest-exact-enough rendering used in every output file (12 significant digits).
std::string format_number(double v);

void write_curve_csv(std::ostream& out, const std::vector<sim::CurvePoint>& curve, std::uint64_t seed);

struct CsvRow {
    std::string sweep_param;
    double param_value = 0.0;
    std::string algorithm;
    double p_error = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

std::vector<CsvRow> read_curve_csv(std::istream& in);

inline constexpr const char* kCsvHeader = "sweep_param,param_value,algorithm,p_error,trials,seed";

}  // namespace simloc::config
