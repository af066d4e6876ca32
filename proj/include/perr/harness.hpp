#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "perr/dgp.hpp"
#include "perr/estimators.hpp"
#include "perr/random.hpp"

namespace perr {

struct ExperimentGrid {
    DgpParams dgp_params;
    std::vector<int> scenarios{1, 2, 3, 4};
    std::vector<double> dropout_targets{0.0, 0.05, 0.10, 0.15, 0.20};
    std::size_t cohort_size = 100'000;
    std::size_t n_replicates = 10'000;
    std::uint64_t master_seed = 0;

    /// Throws InvalidParams.
    void validate() const;

    friend bool operator==(const ExperimentGrid&, const ExperimentGrid&) = default;
};

/// Independent deterministic stream for one replicate. The key is folded
/// through SplitMix64 one index at a time:
///   h = mix64(seed + phi)
///   h = mix64(h ^ scenario)
///   h = mix64((h + phi) ^ dropout_index)
///   h = mix64(h ^ replicate_index)
/// and seeds a xoshiro256** state. Stable across versions.
RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t scenario_id,
                           std::uint64_t dropout_index, std::uint64_t replicate_index) noexcept;

/// One (scenario, dropout level) cell with its calibrated intercept.
struct GridCell {
    DgpParams params;
    ScenarioSpec spec;
    std::size_t dropout_index = 0;
    DropoutIntercept intercept = DropoutIntercept::none();
    std::size_t cohort_size = 0;
    std::uint64_t master_seed = 0;

    /// Calibrates the intercept for the scenario and target.
    static GridCell make(const DgpParams& params, const ScenarioSpec& spec,
                         std::size_t dropout_index, std::size_t cohort_size,
                         std::uint64_t master_seed);
};

struct ReplicateResult {
    int scenario_id = 0;
    double dropout_target = 0.0;
    std::size_t replicate_index = 0;
    EstimateSet estimates;
    double realized_dropout_fraction = 0.0;

    friend bool operator==(const ReplicateResult&, const ReplicateResult&) = default;
};

ReplicateResult run_replicate(const GridCell& cell, std::size_t replicate_index);

/// Runs replicates [0, n_replicates) of one cell on `workers` threads.
/// Results are indexed by replicate, independent of scheduling.
std::vector<ReplicateResult> run_cell(const GridCell& cell, std::size_t n_replicates,
                                      unsigned workers);

struct SummaryRow {
    int scenario_id = 0;
    double dropout_target = 0.0;
    Estimator estimator = Estimator::perr_comp;
    std::optional<double> mean;   ///< empty when every replicate failed
    std::optional<double> p2_5;
    std::optional<double> p97_5;
    std::size_t n_used = 0;
    std::size_t n_failed = 0;
    std::optional<double> oracle;  ///< asymptotic value; empty if undefined

    friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

/// Mean over successful replicates, summed in replicate order; 2.5th and
/// 97.5th percentiles by the shared percentile rule.
SummaryRow summarize_replicates(const std::vector<ReplicateResult>& results, Estimator which,
                                std::optional<double> oracle);

/// Three rows per cell, ordered by (scenario, dropout, estimator). Output is
/// bit-identical for any worker count >= 1.
std::vector<SummaryRow> run_experiment(const ExperimentGrid& grid, unsigned workers);

}  // namespace perr
