#include "perr/dgp.hpp"

#include <cmath>
#include <string>

#include "perr/error.hpp"

namespace perr {

namespace {

void require_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidParams(std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
    }
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw InvalidParams(std::string(name) + " must be finite");
    }
}

}  // namespace

void DgpParams::validate() const {
    require_probability(p_c, "p_c");
    require_probability(p1, "p1");
    require_probability(p2, "p2");
    require_finite(alpha0, "alpha0");
    require_finite(alpha1, "alpha1");
    require_finite(gamma_c, "gamma_c");
    require_finite(gamma_x, "gamma_x");
    require_finite(gamma_y1, "gamma_y1");
    if (!(r_c > 0.0) || !std::isfinite(r_c)) throw InvalidParams("r_c must be positive");
    if (!(rr_x > 0.0) || !std::isfinite(rr_x)) throw InvalidParams("rr_x must be positive");
    if (p1 * r_c > 1.0) {
        throw InvalidParams("p1 * r_c = " + std::to_string(p1 * r_c) + " exceeds 1");
    }
    for (int c = 0; c < 2; ++c) {
        for (int x = 0; x < 2; ++x) {
            const double risk = p2 * (c ? r_c : 1.0) * (x ? rr_x : 1.0);
            if (risk > 1.0) {
                throw InvalidParams("p2 * r_c^" + std::to_string(c) + " * rr_x^" +
                                    std::to_string(x) + " = " + std::to_string(risk) +
                                    " exceeds 1");
            }
        }
    }
}

bool ActiveDeterminants::contains(Determinant d) const noexcept {
    switch (d) {
        case Determinant::confounder: return confounder;
        case Determinant::treatment: return treatment;
        case Determinant::prior_event: return prior_event;
    }
    return false;
}

ActiveDeterminants determinants_for(int scenario_id) {
    switch (scenario_id) {
        case 1: return {true, true, true};
        case 2: return {true, false, true};
        case 3: return {true, true, false};
        case 4: return {true, false, false};
        default: throw InvalidParams("unknown scenario " + std::to_string(scenario_id));
    }
}

ScenarioSpec::ScenarioSpec(int scenario_id, double target_dropout)
    : scenario_id_(scenario_id),
      target_dropout_(target_dropout),
      active_(determinants_for(scenario_id)) {
    if (!(target_dropout >= 0.0 && target_dropout <= kMaxDropoutTarget)) {
        throw InvalidParams("target dropout must lie in [0, 0.5], got " +
                            std::to_string(target_dropout));
    }
}

double expit(double z) noexcept {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double logit(double p) noexcept { return std::log(p / (1.0 - p)); }

CellProbabilities::CellProbabilities(const DgpParams& params, const ActiveDeterminants& active,
                                     DropoutIntercept intercept) {
    params.validate();
    const double g_c = active.confounder ? params.gamma_c : 0.0;
    const double g_x = active.treatment ? params.gamma_x : 0.0;
    const double g_y = active.prior_event ? params.gamma_y1 : 0.0;

    c = params.p_c;
    for (int ci = 0; ci < 2; ++ci) {
        const double conf = ci ? params.r_c : 1.0;
        x[ci] = expit(params.alpha0 + params.alpha1 * ci);
        y1[ci] = params.p1 * conf;
        for (int xi = 0; xi < 2; ++xi) {
            y2[ci][xi] = params.p2 * conf * (xi ? params.rr_x : 1.0);
            for (int yi = 0; yi < 2; ++yi) {
                m2[ci][2 * xi + yi] =
                    intercept.no_dropout()
                        ? 0.0
                        : expit(intercept.value() + g_c * ci + g_x * xi + g_y * yi);
            }
        }
    }
}

double marginal_dropout(const DgpParams& params, const ActiveDeterminants& active,
                        DropoutIntercept intercept) {
    const CellProbabilities p(params, active, intercept);
    double total = 0.0;
    for (int ci = 0; ci < 2; ++ci) {
        const double pc = ci ? p.c : 1.0 - p.c;
        for (int xi = 0; xi < 2; ++xi) {
            const double px = xi ? p.x[ci] : 1.0 - p.x[ci];
            for (int yi = 0; yi < 2; ++yi) {
                const double py = yi ? p.y1[ci] : 1.0 - p.y1[ci];
                total += pc * px * py * p.m2[ci][2 * xi + yi];
            }
        }
    }
    return total;
}

DropoutIntercept calibrate_dropout_intercept(const DgpParams& params, const ScenarioSpec& spec) {
    params.validate();
    const double target = spec.target_dropout();
    if (target == 0.0) return DropoutIntercept::none();

    const auto rate = [&](double g) {
        return marginal_dropout(params, spec.active(), DropoutIntercept::at(g));
    };
    double lo = kInterceptLow;
    double hi = kInterceptHigh;
    if (rate(lo) > target || rate(hi) < target) {
        throw NoSolution("dropout rate " + std::to_string(target) +
                         " is not attainable with intercept in [-40, 40]");
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (rate(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return DropoutIntercept::at(0.5 * (lo + hi));
}

namespace {

struct Thresholds {
    BernoulliThreshold c;
    std::array<BernoulliThreshold, 2> x;
    std::array<BernoulliThreshold, 2> y1;
    std::array<BernoulliThreshold, 8> m2;  // [4c + 2x + y1]
    std::array<BernoulliThreshold, 4> y2;  // [2c + x]

    explicit Thresholds(const CellProbabilities& p) : c(p.c) {
        for (int ci = 0; ci < 2; ++ci) {
            x[ci] = BernoulliThreshold(p.x[ci]);
            y1[ci] = BernoulliThreshold(p.y1[ci]);
            for (int k = 0; k < 4; ++k) m2[4 * ci + k] = BernoulliThreshold(p.m2[ci][k]);
            for (int xi = 0; xi < 2; ++xi) y2[2 * ci + xi] = BernoulliThreshold(p.y2[ci][xi]);
        }
    }
};

template <class Sink>
void draw_persons(const Thresholds& t, std::size_t n, RandomStream& stream, Sink&& sink) {
    for (std::size_t i = 0; i < n; ++i) {
        const bool c = stream.bernoulli(t.c);
        const bool x = stream.bernoulli(t.x[c]);
        const bool y1 = stream.bernoulli(t.y1[c]);
        const bool m2 = stream.bernoulli(t.m2[4 * c + 2 * x + y1]);
        const bool y2 = stream.bernoulli(t.y2[2 * c + x]);
        sink(c, x, y1, m2, y2);
    }
}

Thresholds prepare(const DgpParams& params, const ScenarioSpec& spec, DropoutIntercept intercept,
                   std::size_t n) {
    if (n == 0) throw InvalidParams("cohort size must be at least 1");
    if (spec.target_dropout() > 0.0 && intercept.no_dropout()) {
        throw InvalidParams("no-dropout intercept used for a scenario with positive dropout");
    }
    return Thresholds(CellProbabilities(params, spec.active(), intercept));
}

}  // namespace

std::vector<IndividualRecord> sample_cohort(const DgpParams& params, const ScenarioSpec& spec,
                                            DropoutIntercept intercept, std::size_t n,
                                            RandomStream& stream) {
    const Thresholds t = prepare(params, spec, intercept, n);
    std::vector<IndividualRecord> out;
    out.reserve(n);
    draw_persons(t, n, stream, [&](bool c, bool x, bool y1, bool m2, bool y2) {
        out.push_back(IndividualRecord{c, x, y1, m2, m2 ? std::nullopt : std::optional<bool>{y2}});
    });
    return out;
}

CohortSummary sample_cohort_summary(const DgpParams& params, const ScenarioSpec& spec,
                                    DropoutIntercept intercept, std::size_t n,
                                    RandomStream& stream) {
    const Thresholds t = prepare(params, spec, intercept, n);
    // Counts over (x, y1, m2, observed y2).
    std::array<std::uint64_t, 16> cells{};
    draw_persons(t, n, stream, [&](bool, bool x, bool y1, bool m2, bool y2) {
        ++cells[(std::size_t{x} << 3) | (std::size_t{y1} << 2) | (std::size_t{m2} << 1) |
                std::size_t{y2 && !m2}];
    });

    CohortSummary s;
    for (std::size_t k = 0; k < cells.size(); ++k) {
        const std::uint64_t count = cells[k];
        const bool x = k & 8, y1 = k & 4, m2 = k & 2, y2 = k & 1;
        GroupCounts& g = s.group(x);
        g.n_total += count;
        g.sum_y1_all += y1 ? count : 0;
        if (!m2) {
            g.n_completers += count;
            g.sum_y1_completers += y1 ? count : 0;
            g.sum_y2_completers += y2 ? count : 0;
        }
    }
    return s;
}

PopulationEstimands enumerate_population(const DgpParams& params, const ScenarioSpec& spec,
                                         DropoutIntercept intercept) {
    if (spec.target_dropout() > 0.0 && intercept.no_dropout()) {
        throw InvalidParams("no-dropout intercept used for a scenario with positive dropout");
    }
    const CellProbabilities p(params, spec.active(), intercept);
    PopulationEstimands out;

    // Per group: mass, completer mass, and event masses.
    struct Acc {
        double all = 0, comp = 0, y1_all = 0, y1_comp = 0, y2_comp = 0;
    };
    std::array<Acc, 2> acc{};

    for (int ci = 0; ci < 2; ++ci) {
        for (int xi = 0; xi < 2; ++xi) {
            for (int yi = 0; yi < 2; ++yi) {
                for (int mi = 0; mi < 2; ++mi) {
                    for (int zi = 0; zi < 2; ++zi) {
                        const double pm = p.m2[ci][2 * xi + yi];
                        const double prob = (ci ? p.c : 1.0 - p.c) *
                                            (xi ? p.x[ci] : 1.0 - p.x[ci]) *
                                            (yi ? p.y1[ci] : 1.0 - p.y1[ci]) *
                                            (mi ? pm : 1.0 - pm) *
                                            (zi ? p.y2[ci][xi] : 1.0 - p.y2[ci][xi]);
                        out.joint[state_index(ci, xi, yi, mi, zi)] = prob;
                        Acc& a = acc[xi];
                        a.all += prob;
                        a.y1_all += yi ? prob : 0.0;
                        if (mi) {
                            out.marginal_dropout += prob;
                        } else {
                            a.comp += prob;
                            a.y1_comp += yi ? prob : 0.0;
                            a.y2_comp += zi ? prob : 0.0;
                        }
                    }
                }
            }
        }
    }

    const auto to_group = [](const Acc& a) {
        GroupMeans g;
        g.has_members = a.all > 0.0;
        g.has_completers = a.comp > 0.0;
        if (g.has_members) g.y1_all = a.y1_all / a.all;
        if (g.has_completers) {
            g.y1_completers = a.y1_comp / a.comp;
            g.y2_completers = a.y2_comp / a.comp;
        }
        return g;
    };
    out.means = CohortMeans{to_group(acc[1]), to_group(acc[0])};
    out.asymptotic = estimate_all(out.means);
    return out;
}

}  // namespace perr
