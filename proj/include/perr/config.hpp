#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "perr/harness.hpp"

namespace perr {

/// JSON run configuration. Recognized keys:
///
///   dgp.{p_c, alpha0, alpha1, p1, p2, r_c, rr_x, gamma_c, gamma_x, gamma_y1}
///   scenarios, dropout_rates, cohort_size, replicates, seed, workers, out_dir
///
/// Only "seed" is required; everything else falls back to the defaults in
/// DgpParams and ExperimentGrid.
struct RunConfig {
    ExperimentGrid grid;
    std::string out_dir = "results";
    std::optional<unsigned> workers;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws ParseError for malformed JSON and ValidationError (with the
/// offending field) for schema or range violations.
RunConfig parse_config(std::string_view text);

/// Emits every key, so the output reparses to an equal RunConfig.
std::string serialize_config(const RunConfig& config);

/// Throws IoError if the file cannot be read.
RunConfig load_config(const std::filesystem::path& path);

}  // namespace perr
