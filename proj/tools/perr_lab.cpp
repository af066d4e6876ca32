// perr_lab: simulation and estimation front end.
//
//   perr_lab simulate --config F --out DIR [--workers N]
//   perr_lab estimate --input cohort.csv [--bootstrap N --level 0.95 --seed S]
//   perr_lab oracle --config F
//   perr_lab plot --input results.csv --out fig.svg [--true-rr R]
//
// Exit codes: 0 success, 1 validation error, 2 I/O error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "perr/cohort_io.hpp"
#include "perr/config.hpp"
#include "perr/dgp.hpp"
#include "perr/error.hpp"
#include "perr/estimators.hpp"
#include "perr/figure.hpp"
#include "perr/harness.hpp"
#include "perr/results_io.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

unsigned resolve_workers(std::optional<unsigned> flag, const perr::RunConfig& cfg) {
    if (flag) return *flag;
    if (cfg.workers) return *cfg.workers;
    if (const char* env = std::getenv("PERR_LAB_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
        throw perr::ValidationError("PERR_LAB_WORKERS", "expected a positive integer");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string fmt_opt(std::optional<double> v) { return v ? fmt::format("{:.10g}", *v) : "NA"; }

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::optional<unsigned> workers_flag) {
    perr::RunConfig cfg = perr::load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    const unsigned workers = resolve_workers(workers_flag, cfg);

    const auto start = std::chrono::steady_clock::now();
    const auto rows = perr::run_experiment(cfg.grid, workers);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw perr::IoError("cannot create output directory " + cfg.out_dir);
    const auto dir = std::filesystem::path(cfg.out_dir);
    perr::write_results(rows, dir / "results.csv");
    // Plot what the CSV holds so `plot` on results.csv reproduces the figure.
    std::istringstream csv(perr::format_results(rows));
    perr::emit_figure(perr::parse_results(csv), dir / "figure.svg",
                      perr::FigureOptions{cfg.grid.dgp_params.rr_x});

    std::size_t failed = 0;
    for (const auto& r : rows) failed += r.n_failed;
    std::cerr << fmt::format("{} cells x {} replicates x {} persons on {} worker(s) in {:.1f}s; "
                             "{} failed estimates\n",
                             rows.size() / 3, cfg.grid.n_replicates, cfg.grid.cohort_size, workers,
                             elapsed.count(), failed);
    std::cout << (dir / "results.csv").string() << '\n' << (dir / "figure.svg").string() << '\n';
    return 0;
}

int cmd_estimate(const std::string& input, std::size_t bootstrap, double level,
                 std::uint64_t seed) {
    const auto records = perr::read_cohort(input);
    const perr::CohortSummary summary = perr::summarize_cohort(records);
    const perr::EstimateSet est = perr::estimate_all(summary);

    std::cout << (bootstrap ? "estimator,estimate,status,lower,upper,failed_resamples\n"
                            : "estimator,estimate,status\n");
    perr::RandomStream stream(seed);
    for (perr::Estimator e : {perr::Estimator::perr_prev, perr::Estimator::perr_comp,
                              perr::Estimator::rr}) {
        const perr::Estimate& v = est.get(e);
        std::cout << perr::estimator_name(e) << ',' << fmt_opt(v.to_optional()) << ','
                  << perr::status_name(v.status());
        if (bootstrap) {
            if (v.ok()) {
                const auto ci = perr::bootstrap_ci(records, e, bootstrap, level, stream);
                std::cout << fmt::format(",{:.10g},{:.10g},{}", ci.lower, ci.upper, ci.n_failed);
            } else {
                std::cout << ",NA,NA,NA";
            }
        }
        std::cout << '\n';
    }
    return 0;
}

int cmd_oracle(const std::string& config_path) {
    const perr::RunConfig cfg = perr::load_config(config_path);
    const perr::ExperimentGrid& g = cfg.grid;
    std::cout << "scenario,dropout_target,gamma0,marginal_dropout,perr_prev,perr_comp,rr\n";
    for (int s : g.scenarios) {
        for (double d : g.dropout_targets) {
            const perr::ScenarioSpec spec(s, d);
            const auto intercept = perr::calibrate_dropout_intercept(g.dgp_params, spec);
            const auto pop = perr::enumerate_population(g.dgp_params, spec, intercept);
            std::cout << fmt::format(
                "{},{:.6g},{},{:.12g},{},{},{}\n", s, d,
                intercept.no_dropout() ? std::string("NA") : fmt::format("{:.12g}", intercept.value()),
                pop.marginal_dropout, fmt_opt(pop.asymptotic.perr_prev.to_optional()),
                fmt_opt(pop.asymptotic.perr_comp.to_optional()),
                fmt_opt(pop.asymptotic.rr.to_optional()));
        }
    }
    return 0;
}

int cmd_plot(const std::string& input, const std::string& out, double true_rr) {
    const auto rows = perr::read_results(input);
    perr::emit_figure(rows, out, perr::FigureOptions{true_rr});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prior event rate ratio simulation laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir, input, out_path;
    std::optional<unsigned> workers;
    std::size_t bootstrap = 0;
    double level = 0.95;
    std::uint64_t seed = 1;
    double true_rr = 2.0;

    auto* simulate = app.add_subcommand("simulate", "Run the scenario x dropout experiment grid");
    simulate->add_option("--config", config_path, "JSON run configuration")->required();
    simulate->add_option("--out", out_dir, "Output directory (results.csv, figure.svg)")->required();
    simulate->add_option("--workers", workers, "Worker threads (fallback: PERR_LAB_WORKERS)")
        ->check(CLI::Range(1u, 4096u));

    auto* estimate = app.add_subcommand("estimate", "Estimate treatment effects from a cohort CSV");
    estimate->add_option("--input", input, "Cohort CSV (id,x,y1,m2,y2)")->required();
    estimate->add_option("--bootstrap", bootstrap, "Bootstrap resamples (0 = none)");
    estimate->add_option("--level", level, "Confidence level")->check(CLI::Range(0.5, 1.0));
    estimate->add_option("--seed", seed, "Bootstrap seed");

    auto* oracle = app.add_subcommand("oracle", "Print exact asymptotic estimator values per grid cell");
    oracle->add_option("--config", config_path, "JSON run configuration")->required();

    auto* plot = app.add_subcommand("plot", "Render a results CSV as an SVG figure");
    plot->add_option("--input", input, "Results CSV")->required();
    plot->add_option("--out", out_path, "SVG output path")->required();
    plot->add_option("--true-rr", true_rr, "Reference line height");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*simulate) return cmd_simulate(config_path, out_dir, workers);
        if (*estimate) return cmd_estimate(input, bootstrap, level, seed);
        if (*oracle) return cmd_oracle(config_path);
        if (*plot) return cmd_plot(input, out_path, true_rr);
    } catch (const perr::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const perr::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return 0;
}
