#include <doctest.h>

#include <cstdlib>
#include <sys/wait.h>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// End-to-end tests of the command-line runner. The binary path arrives via
// the BDPP_CLI environment variable (set by ctest).

namespace {

namespace fs = std::filesystem;

std::string cli_path() {
    const char* p = std::getenv("BDPP_CLI");
    REQUIRE_MESSAGE(p != nullptr, "BDPP_CLI must point at the cli binary");
    return p;
}

int run_cli(const std::string& args) {
    std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

struct Workdir {
    fs::path dir;
    Workdir() {
        dir = fs::temp_directory_path() / ("bdpp_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Workdir() { fs::remove_all(dir); }
    fs::path operator/(const std::string& name) const { return dir / name; }
};

const char* kBaseConfig = R"({
  "problem": {"family": {"n_agents": 10, "seed": 1}},
  "schedule": {"ring": {"window": 4, "lazy_weight": 1.0}},
  "algorithm": "bdpp",
  "horizon": 1500,
  "seed": 1,
  "bdpp": {"c": 0.27},
  "dpp": {"v": 0},
  "dual_subgrad": {"a0": 4.5},
  "sweep_c": [0.05, 0.27, 1.0, 3.0],
  "compare": ["bdpp", "dual_subgrad"]
})";

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("run produces canonical outputs and is byte-stable") {
    Workdir wd;
    write(wd / "cfg.json", kBaseConfig);
    std::string cfg = (wd / "cfg.json").string();

    CHECK(run_cli("--config " + cfg + " --out " + (wd / "out1").string() + " run") == 0);
    CHECK(fs::exists(wd / "out1/run_bdpp.csv"));
    CHECK(fs::exists(wd / "out1/run_bdpp_summary.json"));

    std::string header = slurp(wd / "out1/run_bdpp.csv").substr(0, 100);
    CHECK(header.rfind("t,objective_error,violation_1,queue_sum_norm,drift,drift_bound,"
                       "lemma1_slack_min",
                       0) == 0);

    CHECK(run_cli("--config " + cfg + " --out " + (wd / "out2").string() + " run") == 0);
    CHECK(slurp(wd / "out1/run_bdpp.csv") == slurp(wd / "out2/run_bdpp.csv"));
    CHECK(slurp(wd / "out1/run_bdpp_summary.json") == slurp(wd / "out2/run_bdpp_summary.json"));

    // a different seed changes the bytes
    CHECK(run_cli("--config " + cfg + " --seed 2 --out " + (wd / "out3").string() + " run") == 0);
    CHECK(slurp(wd / "out1/run_bdpp.csv") != slurp(wd / "out3/run_bdpp.csv"));
}

TEST_CASE("sweep and compare runs") {
    Workdir wd;
    write(wd / "cfg.json", kBaseConfig);
    std::string cfg = (wd / "cfg.json").string();

    CHECK(run_cli("--config " + cfg + " --horizon 800 --out " + (wd / "sw").string() +
                  " sweep") == 0);
    CHECK(fs::exists(wd / "sw/sweep.csv"));
    CHECK(fs::exists(wd / "sw/sweep_summary.json"));
    CHECK(fs::exists(wd / "sw/sweep_c0.27.csv"));
    CHECK(run_cli("--config " + cfg + " --horizon 800 --out " + (wd / "sw2").string() +
                  " sweep") == 0);
    CHECK(slurp(wd / "sw/sweep.csv") == slurp(wd / "sw2/sweep.csv"));

    CHECK(run_cli("--config " + cfg + " --horizon 800 --out " + (wd / "cmp").string() +
                  " compare") == 0);
    CHECK(fs::exists(wd / "cmp/compare.csv"));
    CHECK(fs::exists(wd / "cmp/compare_bdpp.csv"));
    CHECK(fs::exists(wd / "cmp/compare_dual_subgrad.csv"));
    CHECK(fs::exists(wd / "cmp/compare_summary.json"));
    CHECK(fs::exists(wd / "cmp/objective_error.svg"));
    CHECK(fs::exists(wd / "cmp/violation.svg"));
    CHECK(slurp(wd / "cmp/objective_error.svg").find("<svg") == 0);
}

TEST_CASE("bounds and validate-schedule") {
    Workdir wd;
    write(wd / "cfg.json", kBaseConfig);
    std::string cfg = (wd / "cfg.json").string();
    CHECK(run_cli("--config " + cfg + " --out " + (wd / "b").string() + " bounds") == 0);
    CHECK(fs::exists(wd / "b/bounds.json"));
    CHECK(run_cli("--config " + cfg + " validate-schedule") == 0);
}

TEST_CASE("validation failures exit with code 2") {
    Workdir wd;
    write(wd / "cfg.json", kBaseConfig);
    std::string cfg = (wd / "cfg.json").string();

    SUBCASE("missing config") { CHECK(run_cli("--config /nonexistent.json run") == 2); }

    SUBCASE("malformed config") {
        write(wd / "bad.json", "{");
        CHECK(run_cli("--config " + (wd / "bad.json").string() + " run") == 2);
    }

    SUBCASE("unknown algorithm") {
        std::string text = kBaseConfig;
        write(wd / "alg.json", text);
        CHECK(run_cli("--config " + (wd / "alg.json").string() +
                      " compare --algorithms nosuch") == 2);
    }

    SUBCASE("single-value sweep") {
        CHECK(run_cli("--config " + cfg + " sweep --c-values 0.27") == 2);
    }

    SUBCASE("disconnected schedule is rejected") {
        // four partitioned ring rounds, each disconnected alone, but the file
        // declares a connectivity window of 1
        std::ostringstream sch;
        sch << R"({"n_agents": 4, "window": 1, "rounds": [)";
        const char* rounds[] = {
            R"({"edges": [[0,1]], "mixing": [[0.5,0.5,0,0],[0.5,0.5,0,0],[0,0,1,0],[0,0,0,1]]})",
            R"({"edges": [[1,2]], "mixing": [[1,0,0,0],[0,0.5,0.5,0],[0,0.5,0.5,0],[0,0,0,1]]})",
            R"({"edges": [[2,3]], "mixing": [[1,0,0,0],[0,1,0,0],[0,0,0.5,0.5],[0,0,0.5,0.5]]})",
            R"({"edges": [[0,3]], "mixing": [[0.5,0,0,0.5],[0,1,0,0],[0,0,1,0],[0.5,0,0,0.5]]})"};
        for (int i = 0; i < 4; ++i) sch << rounds[i] << (i < 3 ? "," : "");
        sch << "]}";
        write(wd / "sch.json", sch.str());
        std::string cfg2 = R"({
          "problem": {"family": {"n_agents": 4, "seed": 1}},
          "schedule": {"path": ")" + (wd / "sch.json").string() + R"("},
          "horizon": 10
        })";
        write(wd / "cfg2.json", cfg2);
        CHECK(run_cli("--config " + (wd / "cfg2.json").string() + " validate-schedule") == 2);
        CHECK(run_cli("--config " + (wd / "cfg2.json").string() + " run") == 2);

        // the same rounds declared with window 4 pass
        std::string fixed = sch.str();
        fixed.replace(fixed.find("\"window\": 1"), 11, "\"window\": 4");
        write(wd / "sch4.json", fixed);
        std::string cfg3 = R"({
          "problem": {"family": {"n_agents": 4, "seed": 1}},
          "schedule": {"path": ")" + (wd / "sch4.json").string() + R"("},
          "horizon": 10
        })";
        write(wd / "cfg3.json", cfg3);
        CHECK(run_cli("--config " + (wd / "cfg3.json").string() + " validate-schedule") == 0);
    }

    SUBCASE("schedule sized for the wrong agent count") {
        std::string text = kBaseConfig;
        auto pos = text.find("\"window\": 4");
        text.replace(pos, 11, "\"n_agents\": 6, \"window\": 2");
        write(wd / "mismatch.json", text);
        CHECK(run_cli("--config " + (wd / "mismatch.json").string() + " run") == 2);
    }
}

TEST_SUITE_END();
