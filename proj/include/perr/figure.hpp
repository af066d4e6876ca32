#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "perr/harness.hpp"

namespace perr {

struct FigureOptions {
    double reference_rr = 2.0;  ///< horizontal reference line (true effect)
};

inline constexpr double kFigureWidth = 1200.0;
inline constexpr double kFigureHeight = 900.0;
/// Horizontal data-unit offsets that keep the estimator series apart.
inline constexpr double kCompShift = 0.003;
inline constexpr double kPrevShift = -0.003;

/// Bias-versus-dropout chart: one panel per scenario in a 2x2 layout, mean
/// markers with 2.5th/97.5th percentile whiskers. Deterministic for a given
/// input. Rows without a mean get no marker. Throws EmptyInput for no rows.
std::string render_figure(std::span<const SummaryRow> rows, const FigureOptions& options = {});

/// Throws EmptyInput or IoError.
void emit_figure(std::span<const SummaryRow> rows, const std::filesystem::path& path,
                 const FigureOptions& options = {});

}  // namespace perr
