#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace perr {

/// One person's realized values. `c` is unknown for ingested real-data
/// cohorts; `y2` is observed only for completers (m2 == false).
struct IndividualRecord {
    std::optional<bool> c;
    bool x = false;
    bool y1 = false;
    bool m2 = false;
    std::optional<bool> y2;

    bool well_formed() const noexcept { return y2.has_value() == !m2; }

    friend bool operator==(const IndividualRecord&, const IndividualRecord&) = default;
};

/// Sufficient statistics for one exposure group.
struct GroupCounts {
    std::uint64_t n_total = 0;
    std::uint64_t n_completers = 0;
    std::uint64_t sum_y1_all = 0;
    std::uint64_t sum_y1_completers = 0;
    std::uint64_t sum_y2_completers = 0;

    bool consistent() const noexcept {
        return n_completers <= n_total && sum_y1_completers <= n_completers &&
               sum_y1_all >= sum_y1_completers && sum_y1_all - sum_y1_completers <= n_total - n_completers &&
               sum_y2_completers <= n_completers;
    }

    GroupCounts& operator+=(const GroupCounts& other) noexcept {
        n_total += other.n_total;
        n_completers += other.n_completers;
        sum_y1_all += other.sum_y1_all;
        sum_y1_completers += other.sum_y1_completers;
        sum_y2_completers += other.sum_y2_completers;
        return *this;
    }

    friend bool operator==(const GroupCounts&, const GroupCounts&) = default;
};

struct CohortSummary {
    GroupCounts treated;
    GroupCounts control;

    const GroupCounts& group(bool x) const noexcept { return x ? treated : control; }
    GroupCounts& group(bool x) noexcept { return x ? treated : control; }

    friend bool operator==(const CohortSummary&, const CohortSummary&) = default;
};

/// Throws MalformedRecord if any record has y2 present with m2 = 1 or
/// absent with m2 = 0.
CohortSummary summarize_cohort(std::span<const IndividualRecord> records);

}  // namespace perr
