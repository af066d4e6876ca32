#include <doctest.h>

#include <cmath>
#include <numeric>

#include "perr/error.hpp"
#include "perr/harness.hpp"
#include "support/oracles.hpp"

using namespace perr;

namespace {

GridCell cell_for(int scenario, double dropout, std::size_t dropout_index, std::size_t n,
                  std::uint64_t seed = 2024) {
    return GridCell::make(DgpParams{}, ScenarioSpec(scenario, dropout), dropout_index, n, seed);
}

double sd_of(const std::vector<double>& v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / (v.size() - 1));
}

}  // namespace

TEST_CASE("grid validation") {
    ExperimentGrid g;
    CHECK_NOTHROW(g.validate());
    g.dropout_targets = {0.1, 0.05};
    CHECK_THROWS_AS(g.validate(), InvalidParams);
    g = ExperimentGrid{};
    g.scenarios = {};
    CHECK_THROWS_AS(g.validate(), InvalidParams);
    g = ExperimentGrid{};
    g.scenarios = {7};
    CHECK_THROWS_AS(g.validate(), InvalidParams);
    g = ExperimentGrid{};
    g.cohort_size = 0;
    CHECK_THROWS_AS(g.validate(), InvalidParams);
    g = ExperimentGrid{};
    g.dropout_targets = {0.7};
    CHECK_THROWS_AS(g.validate(), InvalidParams);
}

TEST_CASE("run_replicate is deterministic and coincident at zero dropout") {
    const GridCell cell = cell_for(1, 0.0, 0, 20'000);
    for (std::size_t i = 0; i < 20; ++i) {
        const ReplicateResult a = run_replicate(cell, i);
        CHECK(a == run_replicate(cell, i));
        REQUIRE(a.estimates.perr_prev.ok());
        CHECK(a.estimates.perr_prev.value() == a.estimates.perr_comp.value());
        CHECK(a.realized_dropout_fraction == 0.0);
        CHECK(a.replicate_index == i);
    }
}

TEST_CASE("realized dropout matches the calibrated marginal") {
    const GridCell cell = cell_for(1, 0.2, 4, 100'000);
    for (std::size_t i = 0; i < 5; ++i) {
        const ReplicateResult r = run_replicate(cell, i);
        CHECK(std::abs(r.realized_dropout_fraction - 0.2) < 4.0 * std::sqrt(0.2 * 0.8 / 100'000));
    }
}

TEST_CASE("single replicate summary") {
    ExperimentGrid g;
    g.scenarios = {2};
    g.dropout_targets = {0.1};
    g.cohort_size = 5'000;
    g.n_replicates = 1;
    g.master_seed = 8;
    const auto rows = run_experiment(g, 1);
    REQUIRE(rows.size() == 3);
    const auto one = run_replicate(GridCell::make(g.dgp_params, ScenarioSpec(2, 0.1), 0, 5'000, 8), 0);
    for (const auto& row : rows) {
        const double v = one.estimates.get(row.estimator).value();
        CHECK(row.mean == v);
        CHECK(row.p2_5 == v);
        CHECK(row.p97_5 == v);
        CHECK(row.n_used == 1);
        CHECK(row.n_failed == 0);
    }
}

TEST_CASE("worker count does not change results") {
    ExperimentGrid g;
    g.scenarios = {1, 4};
    g.dropout_targets = {0.0, 0.2};
    g.cohort_size = 2'000;
    g.n_replicates = 64;
    g.master_seed = 77;
    const auto serial = run_experiment(g, 1);
    CHECK(serial == run_experiment(g, 8));
    CHECK(serial == run_experiment(g, 3));
}

TEST_CASE("rows are ordered and carry the oracle") {
    ExperimentGrid g;
    g.scenarios = {3, 1};
    g.dropout_targets = {0.0, 0.1};
    g.cohort_size = 1'000;
    g.n_replicates = 4;
    const auto rows = run_experiment(g, 2);
    REQUIRE(rows.size() == 12);
    CHECK(rows.front().scenario_id == 1);
    CHECK(rows.back().scenario_id == 3);
    CHECK(rows[0].estimator == Estimator::perr_comp);
    CHECK(rows[1].estimator == Estimator::perr_prev);
    CHECK(rows[2].estimator == Estimator::rr);
    for (const auto& r : rows) {
        REQUIRE(r.oracle.has_value());
        CHECK(r.n_used + r.n_failed == 4);
        if (r.p2_5 && r.p97_5) CHECK(*r.p2_5 <= *r.p97_5);
    }
    CHECK(*rows[9].oracle == doctest::Approx(2.0).epsilon(1e-12));  // scenario 3, 0.1, perr_comp
}

TEST_CASE("failed replicates are counted, not averaged") {
    ExperimentGrid g;
    g.scenarios = {1};
    g.dropout_targets = {0.0};
    g.cohort_size = 1;  // one group is always empty
    g.n_replicates = 5;
    const auto rows = run_experiment(g, 1);
    for (const auto& r : rows) {
        CHECK(r.n_used == 0);
        CHECK(r.n_failed == 5);
        CHECK_FALSE(r.mean.has_value());
        CHECK_FALSE(r.p2_5.has_value());
    }

    std::vector<ReplicateResult> mixed(3);
    mixed[0].estimates.rr = Estimate::of(1.0);
    mixed[1].estimates.rr = Estimate::undefined();
    mixed[2].estimates.rr = Estimate::of(3.0);
    const SummaryRow row = summarize_replicates(mixed, Estimator::rr, 2.0);
    CHECK(row.n_used == 2);
    CHECK(row.n_failed == 1);
    CHECK(row.mean == 2.0);
    CHECK(row.p2_5 == doctest::Approx(1.05));
    CHECK(row.p97_5 == doctest::Approx(2.95));
}

TEST_CASE("desk scale: scenario 4 PERR_Comp is unbiased at every dropout level") {
    ExperimentGrid g;
    g.scenarios = {4};
    g.cohort_size = 20'000;
    g.n_replicates = 500;
    g.master_seed = 4;
    for (const auto& r : run_experiment(g, 4)) {
        if (r.estimator != Estimator::perr_comp) continue;
        REQUIRE(r.mean.has_value());
        CHECK(std::abs(*r.mean - 2.0) < 0.03);
        CHECK(r.n_failed == 0);
    }
}

TEST_CASE("replicate means converge to the oracle at large cohort size") {
    constexpr std::size_t reps = 16;
    for (int sc : {1, 2}) {
        const GridCell cell = cell_for(sc, 0.2, 4, 1'000'000, 5);
        const auto pop = enumerate_population(cell.params, cell.spec, cell.intercept);
        const auto results = run_cell(cell, reps, 4);
        for (Estimator e : kAllEstimators) {
            std::vector<double> v;
            for (const auto& r : results) v.push_back(r.estimates.get(e).value());
            const double mean = std::accumulate(v.begin(), v.end(), 0.0) / reps;
            CHECK(std::abs(mean - pop.asymptotic.get(e).value()) < 4.0 * sd_of(v) / std::sqrt(reps));
        }
    }
}

TEST_CASE("percentile band narrows as cohort size grows") {
    const auto width = [](std::size_t n) {
        const auto results = run_cell(cell_for(1, 0.1, 2, n, 6), 200, 4);
        std::vector<ReplicateResult> copy = results;
        const SummaryRow row = summarize_replicates(copy, Estimator::perr_prev, std::nullopt);
        return *row.p97_5 - *row.p2_5;
    };
    CHECK(width(100'000) < width(5'000));
}
