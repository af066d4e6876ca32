#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch() {
    const fs::path dir = fs::temp_directory_path() / "perr_cli_test";
    fs::create_directories(dir);
    return dir;
}

Run run(const std::string& args, const std::string& env = "") {
    const fs::path dir = scratch();
    const std::string cmd = env + " " + PERR_LAB_PATH + " " + args + " > " + (dir / "stdout").string() +
                            " 2> " + (dir / "stderr").string();
    const int status = std::system(cmd.c_str());
    return Run{WEXITSTATUS(status), slurp(dir / "stdout"), slurp(dir / "stderr")};
}

fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST_CASE("estimate on the twelve-row cohort") {
    const auto input = write("twelve.csv",
                             "id,x,y1,m2,y2\n"
                             "1,1,1,0,1\n2,1,0,0,1\n3,1,0,0,0\n4,1,0,0,0\n5,1,1,1,\n6,1,1,1,\n"
                             "7,0,1,0,1\n8,0,1,0,0\n9,0,0,0,0\n10,0,0,0,0\n11,0,0,1,\n12,0,0,1,\n");
    const Run r = run("estimate --input " + input.string());
    CHECK(r.code == 0);
    CHECK(r.out ==
          "estimator,estimate,status\n"
          "perr_prev,1.333333333,ok\n"
          "perr_comp,4,ok\n"
          "rr,2,ok\n");
}

TEST_CASE("estimate with bootstrap") {
    std::string text = "id,x,y1,m2,y2\n";
    int id = 0;
    for (int k = 0; k < 20; ++k) {
        for (const char* row : {"1,1,0,1", "1,0,0,1", "1,0,0,0", "1,0,0,0", "1,1,1,", "1,1,1,",
                                "0,1,0,1", "0,1,0,0", "0,0,0,0", "0,0,0,0", "0,0,1,", "0,0,1,"}) {
            text += std::to_string(++id) + "," + row + "\n";
        }
    }
    const auto input = write("boot.csv", text);
    const Run a = run("estimate --input " + input.string() + " --bootstrap 500 --level 0.9 --seed 3");
    const Run b = run("estimate --input " + input.string() + " --bootstrap 500 --level 0.9 --seed 3");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("estimator,estimate,status,lower,upper,failed_resamples\n", 0) == 0);
}

TEST_CASE("estimate error exit codes") {
    CHECK(run("estimate --input /nonexistent/cohort.csv").code == 2);
    const auto bad = write("bad.csv", "id,x,y1,m2,y2\n7,1,0,1,0\n");
    const Run r = run("estimate --input " + bad.string());
    CHECK(r.code == 1);
    CHECK(r.err.find("row 1") != std::string::npos);
    CHECK(run("estimate").code == 1);
    CHECK(run("frobnicate").code == 1);
}

TEST_CASE("simulate, oracle, and plot") {
    const auto cfg = write("cfg.json", R"({"seed": 11, "scenarios": [1, 4], "dropout_rates": [0, 0.2],
                                          "cohort_size": 2000, "replicates": 20})");
    const fs::path out = scratch() / "sim";
    fs::remove_all(out);
    const Run r = run("simulate --config " + cfg.string() + " --out " + out.string() + " --workers 2");
    REQUIRE(r.code == 0);
    const std::string csv = slurp(out / "results.csv");
    CHECK(csv.rfind("scenario,dropout_target,estimator,mean,p2_5,p97_5,n_used,n_failed,oracle\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
    CHECK(fs::exists(out / "figure.svg"));

    // PERR_LAB_WORKERS is the fallback when --workers is absent.
    const fs::path out2 = scratch() / "sim2";
    const Run env = run("simulate --config " + cfg.string() + " --out " + out2.string(),
                        "PERR_LAB_WORKERS=3");
    REQUIRE(env.code == 0);
    CHECK(env.err.find("3 worker(s)") != std::string::npos);
    CHECK(slurp(out2 / "results.csv") == csv);

    const Run o = run("oracle --config " + cfg.string());
    CHECK(o.code == 0);
    CHECK(o.out.rfind("scenario,dropout_target,gamma0,marginal_dropout,perr_prev,perr_comp,rr\n", 0) == 0);
    CHECK(o.out.find("\n4,0.2,") != std::string::npos);
    CHECK(o.out.find("\n1,0,NA,0,2,2,") != std::string::npos);

    const fs::path fig = scratch() / "replot.svg";
    CHECK(run("plot --input " + (out / "results.csv").string() + " --out " + fig.string()).code == 0);
    CHECK(slurp(fig) == slurp(out / "figure.svg"));
}

TEST_CASE("simulate validation and I/O errors") {
    const auto bad = write("bad.json", R"({"seed": 1, "dgp": {"p2": 0.3, "r_c": 2, "rr_x": 2}})");
    const Run r = run("simulate --config " + bad.string() + " --out " + (scratch() / "x").string());
    CHECK(r.code == 1);
    CHECK(r.err.find("dgp.p2") != std::string::npos);
    CHECK(run("simulate --config /nonexistent.json --out /tmp/x").code == 2);
    CHECK(run("oracle --config " + write("broken.json", "{").string()).code == 1);
    CHECK(run("plot --input /nonexistent.csv --out /tmp/x.svg").code == 2);
}
