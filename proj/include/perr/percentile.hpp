#pragma once

#include <span>
#include <vector>

namespace perr {

/// Linear interpolation between order statistics with plotting position
/// (k-1)/(n-1). `sorted` must be ascending and non-empty; q in [0, 1].
double percentile_sorted(std::span<const double> sorted, double q);

/// Copies, sorts, then applies percentile_sorted.
double percentile(std::vector<double> values, double q);

}  // namespace perr
