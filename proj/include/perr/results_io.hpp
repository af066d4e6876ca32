#pragma once

#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "perr/harness.hpp"

namespace perr {

inline constexpr std::string_view kResultsHeader =
    "scenario,dropout_target,estimator,mean,p2_5,p97_5,n_used,n_failed,oracle";

/// Rows sorted by (scenario, dropout_target, estimator); reals rendered with
/// six significant digits, missing values as NA.
std::string format_results(std::span<const SummaryRow> rows);

/// Throws IoError.
void write_results(std::span<const SummaryRow> rows, const std::filesystem::path& path);

/// Throws SchemaError / RowError for malformed input, IoError if unreadable.
std::vector<SummaryRow> parse_results(std::istream& in);
std::vector<SummaryRow> read_results(const std::filesystem::path& path);

}  // namespace perr
