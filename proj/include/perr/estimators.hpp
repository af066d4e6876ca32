#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "perr/cohort.hpp"
#include "perr/random.hpp"

namespace perr {

enum class EstimateStatus {
    ok,
    undefined,  ///< a denominator is zero
    empty,      ///< a required subgroup has no members
};

/// Estimator value or in-band failure marker.
class Estimate {
public:
    static Estimate of(double value) noexcept { return Estimate{EstimateStatus::ok, value}; }
    static Estimate undefined() noexcept { return Estimate{EstimateStatus::undefined, 0.0}; }
    static Estimate empty() noexcept { return Estimate{EstimateStatus::empty, 0.0}; }

    EstimateStatus status() const noexcept { return status_; }
    bool ok() const noexcept { return status_ == EstimateStatus::ok; }

    /// Only meaningful when ok().
    double value() const noexcept { return value_; }

    std::optional<double> to_optional() const noexcept {
        return ok() ? std::optional<double>{value_} : std::nullopt;
    }

    friend bool operator==(const Estimate&, const Estimate&) = default;

private:
    Estimate(EstimateStatus status, double value) noexcept : status_(status), value_(value) {}

    EstimateStatus status_;
    double value_;
};

/// Declared in the order results files are sorted by.
enum class Estimator { perr_comp, perr_prev, rr };

inline constexpr Estimator kAllEstimators[] = {Estimator::perr_comp, Estimator::perr_prev,
                                               Estimator::rr};

std::string_view estimator_name(Estimator e) noexcept;
std::optional<Estimator> parse_estimator(std::string_view name) noexcept;
std::string_view status_name(EstimateStatus s) noexcept;

struct EstimateSet {
    Estimate perr_prev = Estimate::empty();
    Estimate perr_comp = Estimate::empty();
    Estimate rr = Estimate::empty();

    const Estimate& get(Estimator e) const noexcept;

    friend bool operator==(const EstimateSet&, const EstimateSet&) = default;
};

/// Conditional means for one group. Flags carry subgroup emptiness, which
/// proportions alone cannot express.
struct GroupMeans {
    bool has_members = false;
    bool has_completers = false;
    double y1_all = 0.0;         ///< E(Y1 | X=g)
    double y1_completers = 0.0;  ///< E(Y1 | X=g, M2=0)
    double y2_completers = 0.0;  ///< E(Y2 | X=g, M2=0)
};

struct CohortMeans {
    GroupMeans treated;
    GroupMeans control;
};

CohortMeans to_means(const CohortSummary& s) noexcept;

// Ratio-of-ratios estimators. All three take completers-only post-period
// contrasts; they differ in the prior-period contrast.

/// Prior-period contrast over all persons.
Estimate perr_prev(const CohortMeans& m) noexcept;
/// Prior-period contrast over completers only.
Estimate perr_comp(const CohortMeans& m) noexcept;
/// Completer post-period relative risk.
Estimate relative_risk(const CohortMeans& m) noexcept;

inline Estimate perr_prev(const CohortSummary& s) noexcept { return perr_prev(to_means(s)); }
inline Estimate perr_comp(const CohortSummary& s) noexcept { return perr_comp(to_means(s)); }
inline Estimate relative_risk(const CohortSummary& s) noexcept { return relative_risk(to_means(s)); }

EstimateSet estimate_all(const CohortMeans& m) noexcept;
inline EstimateSet estimate_all(const CohortSummary& s) noexcept { return estimate_all(to_means(s)); }

Estimate estimate_one(Estimator e, const CohortSummary& s) noexcept;

struct BootstrapInterval {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t n_failed = 0;  ///< resamples that produced a failure marker
};

struct BootstrapDistribution {
    std::vector<double> values;  ///< successful resample estimates, in draw order
    std::size_t n_failed = 0;
};

/// Draws n_resamples case resamples of `records` (each the same size as the
/// input) and evaluates `which` on each.
BootstrapDistribution bootstrap_distribution(std::span<const IndividualRecord> records,
                                             Estimator which, std::size_t n_resamples,
                                             RandomStream& stream);

/// Percentile bootstrap over case resampling of whole records. Bounds are
/// the (1-level)/2 and (1+level)/2 percentiles of the successful resamples.
/// Requires n_resamples >= 100 and level in (0.5, 1); throws
/// TooManyFailures when more than 10% of resamples fail.
BootstrapInterval bootstrap_ci(std::span<const IndividualRecord> records, Estimator which,
                               std::size_t n_resamples, double level, RandomStream& stream);

}  // namespace perr
