#include <doctest.h>

#include <string>

#include "perr/config.hpp"
#include "perr/error.hpp"

using namespace perr;

namespace {

std::string field_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ValidationError& e) {
        return e.field();
    }
    return "";
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
    const RunConfig cfg = parse_config(R"({"seed": 123})");
    CHECK(cfg.grid.master_seed == 123);
    CHECK(cfg.grid.dgp_params == DgpParams{});
    CHECK(cfg.grid.scenarios == std::vector<int>{1, 2, 3, 4});
    CHECK(cfg.grid.dropout_targets == std::vector<double>{0.0, 0.05, 0.10, 0.15, 0.20});
    CHECK(cfg.grid.cohort_size == 100'000);
    CHECK(cfg.grid.n_replicates == 10'000);
    CHECK_FALSE(cfg.workers.has_value());
    CHECK(cfg.out_dir == "results");
}

TEST_CASE("risk bound violation names the field") {
    try {
        parse_config(R"({"seed": 1, "dgp": {"p2": 0.3, "r_c": 2, "rr_x": 2}})");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "dgp.p2");
        CHECK(std::string(e.what()).find("1.2") != std::string::npos);
    }
    CHECK(field_of(R"({"seed": 1, "dgp": {"p1": 0.5, "r_c": 3}})") == "dgp.p1");
}

TEST_CASE("field-level validation errors") {
    CHECK(field_of(R"({})") == "seed");
    CHECK(field_of(R"({"seed": -1})") == "seed");
    CHECK(field_of(R"({"seed": 1, "dgp": {"p_c": 1.5}})") == "dgp.p_c");
    CHECK(field_of(R"({"seed": 1, "dgp": {"r_c": 0}})") == "dgp.r_c");
    CHECK(field_of(R"({"seed": 1, "dgp": {"alpha0": "x"}})") == "dgp.alpha0");
    CHECK(field_of(R"({"seed": 1, "dgp": {"beta": 1}})") == "dgp.beta");
    CHECK(field_of(R"({"seed": 1, "scenarios": [1, 5]})") == "scenarios");
    CHECK(field_of(R"({"seed": 1, "scenarios": []})") == "scenarios");
    CHECK(field_of(R"({"seed": 1, "dropout_rates": [0.1, 0.05]})") == "dropout_rates");
    CHECK(field_of(R"({"seed": 1, "dropout_rates": [0.6]})") == "dropout_rates");
    CHECK(field_of(R"({"seed": 1, "cohort_size": 0})") == "cohort_size");
    CHECK(field_of(R"({"seed": 1, "replicates": 2.5})") == "replicates");
    CHECK(field_of(R"({"seed": 1, "workers": 0})") == "workers");
    CHECK(field_of(R"({"seed": 1, "out_dir": ""})") == "out_dir");
    CHECK(field_of(R"({"seed": 1, "colour": "red"})") == "colour");
}

TEST_CASE("malformed JSON is a parse error") {
    CHECK_THROWS_AS(parse_config("{\"seed\": 1"), ParseError);
    CHECK_THROWS_AS(parse_config("[1, 2]"), ParseError);
    CHECK_THROWS_AS(parse_config(""), ParseError);
}

TEST_CASE("serialize then parse is lossless") {
    RunConfig cfg = parse_config(R"({
        "seed": 18446744073709551615,
        "dgp": {"p_c": 0.3, "alpha0": -0.7, "gamma_y1": 1.0e-3, "rr_x": 1.5},
        "scenarios": [4, 2],
        "dropout_rates": [0, 0.025, 0.3],
        "cohort_size": 777,
        "replicates": 12,
        "workers": 3,
        "out_dir": "out/run1"
    })");
    CHECK(cfg.grid.master_seed == 18446744073709551615ULL);
    CHECK(parse_config(serialize_config(cfg)) == cfg);

    const RunConfig minimal = parse_config(R"({"seed": 5})");
    CHECK(parse_config(serialize_config(minimal)) == minimal);
}

TEST_CASE("load_config reports unreadable files") {
    CHECK_THROWS_AS(load_config("/nonexistent/dir/config.json"), IoError);
}
