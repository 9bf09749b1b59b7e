#pragma once

#include <string>

#include "simloc/config.hpp"

namespace simloc {

/// Record of one CLI run, written next to every output file.
struct RunManifest {
    std::string command;
    config::ConfigValues values;
    std::string preset;
    std::string output_path;
    std::string tool_version;
    std::string timestamp;  // UTC, ISO-8601
    double sigma_i2 = 0.0;  // resolved from sinr_db
    std::size_t l_count = 2;
    int alphabet_levels = 256;
    int mi_bin_width = 1;
    unsigned threads = 1;

    static RunManifest make(std::string command, const config::ResolvedConfig& cfg, std::string output_path);
    std::string to_json() const;
};

std::string tool_version();
std::string utc_timestamp();

}  // namespace simloc
