#pragma once

#include <filesystem>
#include <functional>
#include <istream>
#include <span>
#include <string_view>
#include <vector>

#include "perr/cohort.hpp"

namespace perr {

using WarningSink = std::function<void(std::string_view)>;

/// Writes warnings to stderr.
WarningSink stderr_warnings();

/// Cohort CSV with header `id,x,y1,m2,y2`; y2 is empty exactly for
/// non-completers (m2 = 1). Throws SchemaError for a wrong header and
/// RowError (1-based data row) for bad values. A header-only file yields an
/// empty cohort and a warning.
std::vector<IndividualRecord> parse_cohort(std::istream& in, const WarningSink& warn);
std::vector<IndividualRecord> read_cohort(const std::filesystem::path& path,
                                          const WarningSink& warn = stderr_warnings());

/// Ids are 1-based positions. The confounder is not written.
void write_cohort(std::span<const IndividualRecord> records, const std::filesystem::path& path);

}  // namespace perr
