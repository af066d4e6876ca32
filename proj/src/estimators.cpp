#include "perr/estimators.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "perr/error.hpp"
#include "perr/percentile.hpp"

namespace perr {

CohortSummary summarize_cohort(std::span<const IndividualRecord> records) {
    CohortSummary s;
    std::size_t row = 0;
    for (const auto& r : records) {
        ++row;
        if (!r.well_formed()) {
            throw MalformedRecord("record " + std::to_string(row) +
                                  (r.m2 ? ": y2 present for a non-completer"
                                        : ": y2 missing for a completer"));
        }
        GroupCounts& g = s.group(r.x);
        ++g.n_total;
        g.sum_y1_all += r.y1;
        if (!r.m2) {
            ++g.n_completers;
            g.sum_y1_completers += r.y1;
            g.sum_y2_completers += *r.y2;
        }
    }
    return s;
}

std::string_view estimator_name(Estimator e) noexcept {
    switch (e) {
        case Estimator::perr_comp: return "perr_comp";
        case Estimator::perr_prev: return "perr_prev";
        case Estimator::rr: return "rr";
    }
    return "?";
}

std::optional<Estimator> parse_estimator(std::string_view name) noexcept {
    for (Estimator e : kAllEstimators) {
        if (estimator_name(e) == name) return e;
    }
    return std::nullopt;
}

std::string_view status_name(EstimateStatus s) noexcept {
    switch (s) {
        case EstimateStatus::ok: return "ok";
        case EstimateStatus::undefined: return "undefined";
        case EstimateStatus::empty: return "empty";
    }
    return "?";
}

const Estimate& EstimateSet::get(Estimator e) const noexcept {
    switch (e) {
        case Estimator::perr_comp: return perr_comp;
        case Estimator::perr_prev: return perr_prev;
        case Estimator::rr: break;
    }
    return rr;
}

namespace {

GroupMeans group_means(const GroupCounts& g) noexcept {
    GroupMeans m;
    m.has_members = g.n_total > 0;
    m.has_completers = g.n_completers > 0;
    if (m.has_members) {
        m.y1_all = static_cast<double>(g.sum_y1_all) / static_cast<double>(g.n_total);
    }
    if (m.has_completers) {
        const auto n = static_cast<double>(g.n_completers);
        m.y1_completers = static_cast<double>(g.sum_y1_completers) / n;
        m.y2_completers = static_cast<double>(g.sum_y2_completers) / n;
    }
    return m;
}

// (num_t / num_c) / (den_t / den_c), with zero denominators reported in-band.
Estimate ratio_of_ratios(double num_t, double num_c, double den_t, double den_c) noexcept {
    if (num_c == 0.0 || den_t == 0.0 || den_c == 0.0) return Estimate::undefined();
    return Estimate::of((num_t / num_c) / (den_t / den_c));
}

bool completers_present(const CohortMeans& m) noexcept {
    return m.treated.has_completers && m.control.has_completers;
}

}  // namespace

CohortMeans to_means(const CohortSummary& s) noexcept {
    return CohortMeans{group_means(s.treated), group_means(s.control)};
}

Estimate perr_prev(const CohortMeans& m) noexcept {
    if (!completers_present(m)) return Estimate::empty();
    return ratio_of_ratios(m.treated.y2_completers, m.control.y2_completers, m.treated.y1_all,
                           m.control.y1_all);
}

Estimate perr_comp(const CohortMeans& m) noexcept {
    if (!completers_present(m)) return Estimate::empty();
    return ratio_of_ratios(m.treated.y2_completers, m.control.y2_completers,
                           m.treated.y1_completers, m.control.y1_completers);
}

Estimate relative_risk(const CohortMeans& m) noexcept {
    if (!completers_present(m)) return Estimate::empty();
    if (m.control.y2_completers == 0.0) return Estimate::undefined();
    return Estimate::of(m.treated.y2_completers / m.control.y2_completers);
}

EstimateSet estimate_all(const CohortMeans& m) noexcept {
    return EstimateSet{perr_prev(m), perr_comp(m), relative_risk(m)};
}

Estimate estimate_one(Estimator e, const CohortSummary& s) noexcept {
    const CohortMeans m = to_means(s);
    switch (e) {
        case Estimator::perr_comp: return perr_comp(m);
        case Estimator::perr_prev: return perr_prev(m);
        case Estimator::rr: break;
    }
    return relative_risk(m);
}

BootstrapDistribution bootstrap_distribution(std::span<const IndividualRecord> records,
                                             Estimator which, std::size_t n_resamples,
                                             RandomStream& stream) {
    // Each record's contribution, precomputed so a resample is a sum.
    std::vector<std::pair<bool, GroupCounts>> contrib;
    contrib.reserve(records.size());
    for (const auto& r : records) {
        const CohortSummary one = summarize_cohort(std::span{&r, 1});
        contrib.emplace_back(r.x, one.group(r.x));
    }

    BootstrapDistribution out;
    out.values.reserve(n_resamples);
    for (std::size_t b = 0; b < n_resamples; ++b) {
        CohortSummary s;
        for (std::size_t i = 0; i < contrib.size(); ++i) {
            const auto& [x, g] = contrib[stream.below(contrib.size())];
            s.group(x) += g;
        }
        const Estimate e = estimate_one(which, s);
        if (e.ok()) {
            out.values.push_back(e.value());
        } else {
            ++out.n_failed;
        }
    }
    return out;
}

BootstrapInterval bootstrap_ci(std::span<const IndividualRecord> records, Estimator which,
                               std::size_t n_resamples, double level, RandomStream& stream) {
    if (n_resamples < 100) {
        throw InvalidParams("bootstrap needs at least 100 resamples");
    }
    if (!(level > 0.5 && level < 1.0)) {
        throw InvalidParams("bootstrap level must lie in (0.5, 1)");
    }
    if (records.empty()) {
        throw EmptyInput("bootstrap of an empty cohort");
    }

    BootstrapDistribution dist = bootstrap_distribution(records, which, n_resamples, stream);
    if (dist.n_failed * 10 > n_resamples) {
        throw TooManyFailures(std::to_string(dist.n_failed) + " of " +
                              std::to_string(n_resamples) +
                              " bootstrap resamples produced no estimate");
    }

    std::sort(dist.values.begin(), dist.values.end());
    const double tail = (1.0 - level) / 2.0;
    return BootstrapInterval{percentile_sorted(dist.values, tail),
                             percentile_sorted(dist.values, 1.0 - tail), dist.n_failed};
}

}  // namespace perr
