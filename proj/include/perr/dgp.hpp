#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "perr/cohort.hpp"
#include "perr/estimators.hpp"
#include "perr/random.hpp"

namespace perr {

/// Structural coefficients of the two-period generator.
///
///   C  ~ Bernoulli(p_c)
///   X  | C        ~ Bernoulli(expit(alpha0 + alpha1 C))
///   Y1 | C        ~ Bernoulli(p1 r_c^C)
///   M2 | C, X, Y1 ~ Bernoulli(expit(gamma0 + active dropout terms))
///   Y2 | C, X     ~ Bernoulli(p2 r_c^C rr_x^X)
///
/// Y1 and Y2 share the multiplicative confounder effect r_c, so the
/// period-to-period contrast cancels it exactly in the absence of dropout.
struct DgpParams {
    double p_c = 0.85;
    double alpha0 = -1.15;
    double alpha1 = 0.65;
    double p1 = 0.35;
    double p2 = 0.17;
    double r_c = 2.7;
    double rr_x = 2.0;
    double gamma_c = 2.2;
    double gamma_x = 3.6;
    double gamma_y1 = 0.3;

    /// Throws InvalidParams naming the first violated constraint.
    void validate() const;

    friend bool operator==(const DgpParams&, const DgpParams&) = default;
};

enum class Determinant { confounder, treatment, prior_event };

struct ActiveDeterminants {
    bool confounder = true;
    bool treatment = false;
    bool prior_event = false;

    bool contains(Determinant d) const noexcept;

    friend bool operator==(const ActiveDeterminants&, const ActiveDeterminants&) = default;
};

/// Which covariates drive dropout, by scenario:
///   1: confounder, treatment, prior event
///   2: confounder, prior event
///   3: confounder, treatment
///   4: confounder
ActiveDeterminants determinants_for(int scenario_id);

inline constexpr double kMaxDropoutTarget = 0.5;

class ScenarioSpec {
public:
    /// Throws InvalidParams for an unknown scenario or a target outside
    /// [0, 0.5].
    ScenarioSpec(int scenario_id, double target_dropout);

    int scenario_id() const noexcept { return scenario_id_; }
    double target_dropout() const noexcept { return target_dropout_; }
    const ActiveDeterminants& active() const noexcept { return active_; }

private:
    int scenario_id_;
    double target_dropout_;
    ActiveDeterminants active_;
};

/// Calibrated dropout intercept. The empty state is the no-dropout mode in
/// which M2 is identically 0.
class DropoutIntercept {
public:
    static DropoutIntercept none() noexcept { return DropoutIntercept{}; }
    static DropoutIntercept at(double gamma0) noexcept { return DropoutIntercept{gamma0}; }

    bool no_dropout() const noexcept { return !gamma0_.has_value(); }
    /// Only meaningful when !no_dropout().
    double value() const noexcept { return gamma0_.value_or(0.0); }

    friend bool operator==(const DropoutIntercept&, const DropoutIntercept&) = default;

private:
    DropoutIntercept() = default;
    explicit DropoutIntercept(double g) : gamma0_(g) {}

    std::optional<double> gamma0_;
};

inline constexpr double kInterceptLow = -40.0;
inline constexpr double kInterceptHigh = 40.0;

/// Per-cell probabilities of the generator for one (params, scenario,
/// intercept). Inactive dropout coefficients are zeroed.
struct CellProbabilities {
    double c = 0.0;
    std::array<double, 2> x{};                    ///< P(X=1 | c)
    std::array<double, 2> y1{};                   ///< P(Y1=1 | c)
    std::array<std::array<double, 4>, 2> m2{};    ///< P(M2=1 | c, x, y1), index [c][2x+y1]
    std::array<std::array<double, 2>, 2> y2{};    ///< P(Y2=1 | c, x)

    /// Validates params; throws InvalidParams if any probability leaves [0,1].
    CellProbabilities(const DgpParams& params, const ActiveDeterminants& active,
                      DropoutIntercept intercept);
};

double expit(double z) noexcept;
double logit(double p) noexcept;

/// Exact P(M2=1) by enumerating the eight (C, X, Y1) states.
double marginal_dropout(const DgpParams& params, const ActiveDeterminants& active,
                        DropoutIntercept intercept);

/// Bisection on [-40, 40] until the bracket is narrower than 1e-12. Target 0
/// returns the no-dropout mode. Throws NoSolution if the target is not
/// attainable within the bracket.
DropoutIntercept calibrate_dropout_intercept(const DgpParams& params, const ScenarioSpec& spec);

/// Draws n >= 1 independent records. Each person consumes exactly five
/// draws from `stream`, in the order C, X, Y1, M2, Y2; Y2 is discarded for
/// non-completers.
std::vector<IndividualRecord> sample_cohort(const DgpParams& params, const ScenarioSpec& spec,
                                            DropoutIntercept intercept, std::size_t n,
                                            RandomStream& stream);

/// Same draws as sample_cohort, accumulated straight into sufficient
/// statistics: summarize_cohort(sample_cohort(..., s)) equals
/// sample_cohort_summary(..., s') for streams s, s' in the same state.
CohortSummary sample_cohort_summary(const DgpParams& params, const ScenarioSpec& spec,
                                    DropoutIntercept intercept, std::size_t n,
                                    RandomStream& stream);

constexpr std::size_t state_index(bool c, bool x, bool y1, bool m2, bool y2) noexcept {
    return (std::size_t{c} << 4) | (std::size_t{x} << 3) | (std::size_t{y1} << 2) |
           (std::size_t{m2} << 1) | std::size_t{y2};
}

struct PopulationEstimands {
    /// Exact law over (c, x, y1, m2, y2), indexed by state_index. Y2 is a
    /// counterfactual value for non-completers.
    std::array<double, 32> joint{};
    double marginal_dropout = 0.0;
    CohortMeans means;
    EstimateSet asymptotic;
};

PopulationEstimands enumerate_population(const DgpParams& params, const ScenarioSpec& spec,
                                         DropoutIntercept intercept);

}  // namespace perr
