#include "perr/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "perr/error.hpp"

namespace perr {

using nlohmann::json;

namespace {

double get_number(const json& obj, const char* key, double fallback, const std::string& field) {
    const auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number()) throw ValidationError(field, "expected a number");
    return it->get<double>();
}

std::uint64_t get_unsigned(const json& value, const std::string& field) {
    if (value.is_number_unsigned()) return value.get<std::uint64_t>();
    if (value.is_number_integer()) {
        if (value.get<std::int64_t>() < 0) throw ValidationError(field, "must be nonnegative");
        return static_cast<std::uint64_t>(value.get<std::int64_t>());
    }
    throw ValidationError(field, "expected a nonnegative integer");
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& prefix) {
    for (const auto& [key, _] : obj.items()) {
        if (!known.count(key)) throw ValidationError(prefix + key, "unknown key");
    }
}

void require_probability(double v, const std::string& field) {
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(field, fmt::format("{} is outside [0, 1]", v));
}

void validate_dgp(const DgpParams& p) {
    require_probability(p.p_c, "dgp.p_c");
    require_probability(p.p1, "dgp.p1");
    require_probability(p.p2, "dgp.p2");
    if (!(p.r_c > 0.0)) throw ValidationError("dgp.r_c", "must be positive");
    if (!(p.rr_x > 0.0)) throw ValidationError("dgp.rr_x", "must be positive");
    for (double c : {1.0, p.r_c}) {
        if (p.p1 * c > 1.0) {
            throw ValidationError("dgp.p1", fmt::format("risk bound violated: p1*r_c = {}*{} = {} > 1",
                                                        p.p1, c, p.p1 * c));
        }
    }
    for (double c : {1.0, p.r_c}) {
        for (double x : {1.0, p.rr_x}) {
            const double risk = p.p2 * c * x;
            if (risk > 1.0) {
                throw ValidationError(
                    "dgp.p2", fmt::format("risk bound violated: p2*r_c^C*rr_x^X = {}*{}*{} = {} > 1",
                                          p.p2, c, x, risk));
            }
        }
    }
    p.validate();
}

DgpParams parse_dgp(const json& obj) {
    if (!obj.is_object()) throw ValidationError("dgp", "expected an object");
    reject_unknown(obj,
                   {"p_c", "alpha0", "alpha1", "p1", "p2", "r_c", "rr_x", "gamma_c", "gamma_x",
                    "gamma_y1"},
                   "dgp.");
    DgpParams p;
    p.p_c = get_number(obj, "p_c", p.p_c, "dgp.p_c");
    p.alpha0 = get_number(obj, "alpha0", p.alpha0, "dgp.alpha0");
    p.alpha1 = get_number(obj, "alpha1", p.alpha1, "dgp.alpha1");
    p.p1 = get_number(obj, "p1", p.p1, "dgp.p1");
    p.p2 = get_number(obj, "p2", p.p2, "dgp.p2");
    p.r_c = get_number(obj, "r_c", p.r_c, "dgp.r_c");
    p.rr_x = get_number(obj, "rr_x", p.rr_x, "dgp.rr_x");
    p.gamma_c = get_number(obj, "gamma_c", p.gamma_c, "dgp.gamma_c");
    p.gamma_x = get_number(obj, "gamma_x", p.gamma_x, "dgp.gamma_x");
    p.gamma_y1 = get_number(obj, "gamma_y1", p.gamma_y1, "dgp.gamma_y1");
    validate_dgp(p);
    return p;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed config: ") + e.what());
    }
    if (!root.is_object()) throw ParseError("config must be a JSON object");
    reject_unknown(root,
                   {"dgp", "scenarios", "dropout_rates", "cohort_size", "replicates", "seed",
                    "workers", "out_dir"},
                   "");

    RunConfig cfg;
    ExperimentGrid& g = cfg.grid;
    if (root.contains("dgp")) g.dgp_params = parse_dgp(root["dgp"]);

    if (root.contains("scenarios")) {
        const json& s = root["scenarios"];
        if (!s.is_array() || s.empty()) throw ValidationError("scenarios", "expected a non-empty array");
        g.scenarios.clear();
        for (const json& v : s) {
            const auto id = get_unsigned(v, "scenarios");
            if (id < 1 || id > 4) throw ValidationError("scenarios", fmt::format("unknown scenario {}", id));
            g.scenarios.push_back(static_cast<int>(id));
        }
    }

    if (root.contains("dropout_rates")) {
        const json& d = root["dropout_rates"];
        if (!d.is_array() || d.empty()) {
            throw ValidationError("dropout_rates", "expected a non-empty array");
        }
        g.dropout_targets.clear();
        for (const json& v : d) {
            if (!v.is_number()) throw ValidationError("dropout_rates", "expected numbers");
            const double rate = v.get<double>();
            if (!(rate >= 0.0 && rate <= kMaxDropoutTarget)) {
                throw ValidationError("dropout_rates", fmt::format("{} is outside [0, 0.5]", rate));
            }
            if (!g.dropout_targets.empty() && !(g.dropout_targets.back() < rate)) {
                throw ValidationError("dropout_rates", "must be strictly ascending");
            }
            g.dropout_targets.push_back(rate);
        }
    }

    if (root.contains("cohort_size")) {
        g.cohort_size = get_unsigned(root["cohort_size"], "cohort_size");
        if (g.cohort_size == 0) throw ValidationError("cohort_size", "must be positive");
    }
    if (root.contains("replicates")) {
        g.n_replicates = get_unsigned(root["replicates"], "replicates");
        if (g.n_replicates == 0) throw ValidationError("replicates", "must be positive");
    }
    if (!root.contains("seed")) throw ValidationError("seed", "required");
    g.master_seed = get_unsigned(root["seed"], "seed");

    if (root.contains("workers")) {
        const auto w = get_unsigned(root["workers"], "workers");
        if (w == 0 || w > 4096) throw ValidationError("workers", "must lie in [1, 4096]");
        cfg.workers = static_cast<unsigned>(w);
    }
    if (root.contains("out_dir")) {
        const json& o = root["out_dir"];
        if (!o.is_string() || o.get<std::string>().empty()) {
            throw ValidationError("out_dir", "expected a non-empty string");
        }
        cfg.out_dir = o.get<std::string>();
    }
    return cfg;
}

std::string serialize_config(const RunConfig& config) {
    const ExperimentGrid& g = config.grid;
    const DgpParams& p = g.dgp_params;
    json root = {
        {"dgp",
         {{"p_c", p.p_c},
          {"alpha0", p.alpha0},
          {"alpha1", p.alpha1},
          {"p1", p.p1},
          {"p2", p.p2},
          {"r_c", p.r_c},
          {"rr_x", p.rr_x},
          {"gamma_c", p.gamma_c},
          {"gamma_x", p.gamma_x},
          {"gamma_y1", p.gamma_y1}}},
        {"scenarios", g.scenarios},
        {"dropout_rates", g.dropout_targets},
        {"cohort_size", g.cohort_size},
        {"replicates", g.n_replicates},
        {"seed", g.master_seed},
        {"out_dir", config.out_dir},
    };
    if (config.workers) root["workers"] = *config.workers;
    return root.dump(2) + "\n";
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace perr
