#include "perr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "perr/error.hpp"
#include "perr/percentile.hpp"

namespace perr {

void ExperimentGrid::validate() const {
    dgp_params.validate();
    if (scenarios.empty()) throw InvalidParams("scenarios must not be empty");
    for (int s : scenarios) determinants_for(s);
    if (dropout_targets.empty()) throw InvalidParams("dropout targets must not be empty");
    for (std::size_t i = 0; i < dropout_targets.size(); ++i) {
        const double d = dropout_targets[i];
        if (!(d >= 0.0 && d <= kMaxDropoutTarget)) {
            throw InvalidParams("dropout target outside [0, 0.5]");
        }
        if (i > 0 && !(dropout_targets[i - 1] < d)) {
            throw InvalidParams("dropout targets must be sorted ascending");
        }
    }
    if (cohort_size == 0) throw InvalidParams("cohort size must be positive");
    if (n_replicates == 0) throw InvalidParams("replicate count must be positive");
}

RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t scenario_id,
                           std::uint64_t dropout_index, std::uint64_t replicate_index) noexcept {
    constexpr std::uint64_t phi = 0x9e3779b97f4a7c15ULL;
    std::uint64_t h = mix64(master_seed + phi);
    h = mix64(h ^ scenario_id);
    h = mix64((h + phi) ^ dropout_index);
    h = mix64(h ^ replicate_index);
    return RandomStream(h);
}

GridCell GridCell::make(const DgpParams& params, const ScenarioSpec& spec,
                        std::size_t dropout_index, std::size_t cohort_size,
                        std::uint64_t master_seed) {
    return GridCell{params,      spec,       dropout_index,
                    calibrate_dropout_intercept(params, spec),
                    cohort_size, master_seed};
}

ReplicateResult run_replicate(const GridCell& cell, std::size_t replicate_index) {
    RandomStream stream = derive_stream(cell.master_seed,
                                        static_cast<std::uint64_t>(cell.spec.scenario_id()),
                                        cell.dropout_index, replicate_index);
    const CohortSummary s =
        sample_cohort_summary(cell.params, cell.spec, cell.intercept, cell.cohort_size, stream);
    const std::uint64_t completers = s.treated.n_completers + s.control.n_completers;
    return ReplicateResult{
        cell.spec.scenario_id(),
        cell.spec.target_dropout(),
        replicate_index,
        estimate_all(s),
        static_cast<double>(cell.cohort_size - completers) / static_cast<double>(cell.cohort_size),
    };
}

std::vector<ReplicateResult> run_cell(const GridCell& cell, std::size_t n_replicates,
                                      unsigned workers) {
    std::vector<ReplicateResult> results(n_replicates);
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(
                                                            std::max<std::size_t>(n_replicates, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < n_replicates; ++i) results[i] = run_replicate(cell, i);
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                try {
                    for (std::size_t i = next++; i < n_replicates; i = next++) {
                        results[i] = run_replicate(cell, i);
                    }
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = n_replicates;
                }
            });
        }
    }
    if (error) std::rethrow_exception(error);
    return results;
}

SummaryRow summarize_replicates(const std::vector<ReplicateResult>& results, Estimator which,
                                std::optional<double> oracle) {
    SummaryRow row;
    row.estimator = which;
    row.oracle = oracle;
    if (!results.empty()) {
        row.scenario_id = results.front().scenario_id;
        row.dropout_target = results.front().dropout_target;
    }

    std::vector<double> values;
    values.reserve(results.size());
    for (const auto& r : results) {
        const Estimate& e = r.estimates.get(which);
        if (e.ok()) {
            values.push_back(e.value());
        } else {
            ++row.n_failed;
        }
    }
    row.n_used = values.size();
    if (values.empty()) return row;

    double sum = 0.0;
    for (double v : values) sum += v;
    row.mean = sum / static_cast<double>(values.size());

    std::sort(values.begin(), values.end());
    row.p2_5 = percentile_sorted(values, 0.025);
    row.p97_5 = percentile_sorted(values, 0.975);
    return row;
}

std::vector<SummaryRow> run_experiment(const ExperimentGrid& grid, unsigned workers) {
    grid.validate();
    std::vector<int> scenarios = grid.scenarios;
    std::sort(scenarios.begin(), scenarios.end());
    scenarios.erase(std::unique(scenarios.begin(), scenarios.end()), scenarios.end());

    std::vector<SummaryRow> rows;
    rows.reserve(scenarios.size() * grid.dropout_targets.size() * 3);
    for (int scenario : scenarios) {
        for (std::size_t d = 0; d < grid.dropout_targets.size(); ++d) {
            const ScenarioSpec spec(scenario, grid.dropout_targets[d]);
            const GridCell cell =
                GridCell::make(grid.dgp_params, spec, d, grid.cohort_size, grid.master_seed);
            const PopulationEstimands truth =
                enumerate_population(grid.dgp_params, spec, cell.intercept);
            const auto results = run_cell(cell, grid.n_replicates, workers);
            for (Estimator e : kAllEstimators) {
                SummaryRow row = summarize_replicates(results, e, truth.asymptotic.get(e).to_optional());
                row.scenario_id = scenario;
                row.dropout_target = spec.target_dropout();
                rows.push_back(row);
            }
        }
    }
    return rows;
}

}  // namespace perr
