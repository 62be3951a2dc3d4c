#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "bdpp/csv.hpp"
#include "bdpp/engine.hpp"
#include "bdpp/error.hpp"
#include "bdpp/family.hpp"
#include "bdpp/json_io.hpp"
#include "bdpp/schedule.hpp"
#include "support.hpp"

using namespace bdpp;

namespace {

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("problem json round trip preserves evaluations") {
    CoupledProblem original = make_resource_family(6, 42);
    CoupledProblem parsed = problem_from_json(problem_to_json(original));
    REQUIRE(parsed.num_agents() == 6);
    CHECK(parsed.constraint_dim == 1);
    REQUIRE(parsed.slater_point.has_value());

    Rng rng(1);
    std::vector<Eigen::VectorXd> x;
    for (const auto& agent : original.agents) x.push_back(agent.feasible_set.sample(rng));
    auto [f0, g0] = eval_global(original, x);
    auto [f1, g1] = eval_global(parsed, x);
    CHECK(f0 == f1);
    CHECK(g0[0] == g1[0]);
    CHECK(slater_slack(parsed) == slater_slack(original));
}

TEST_CASE("problem json accepts the documented schema") {
    const char* text = R"({
      "agents": [
        {"dim": 1,
         "objective": {"kind": "quadratic", "center": [1.0], "weight": 1.0},
         "constraint": [{"kind": "affine", "slope": [1.0], "offset": -1.0}],
         "box": {"lower": [0.0], "upper": [2.0]}}
      ],
      "slater_point": [[0.0]]
    })";
    CoupledProblem p = problem_from_json(text);
    CHECK(p.num_agents() == 1);
    CHECK(slater_slack(p) == doctest::Approx(1.0));
}

TEST_CASE("problem json rejects malformed input") {
    CHECK_THROWS_AS(problem_from_json("{nope"), Error);
    CHECK_THROWS_AS(problem_from_json("{}"), Error);
    CHECK_THROWS_AS(problem_from_json(R"({"agents": [{"dim": 1,
        "objective": {"kind": "cubic"}, "constraint": [],
        "box": {"lower": [0.0], "upper": [1.0]}}]})"),
                    Error);
}

TEST_CASE("custom callbacks cannot be serialized") {
    CoupledProblem p = testsup::single_agent_problem(1.0, 1.0, 1.0, -1.0, 0.0, 2.0);
    p.agents[0].objective = ScalarConvexFn::custom(
        [](const Eigen::VectorXd& x) { return x.squaredNorm(); },
        [](const Eigen::VectorXd& x) { return 2.0 * x; });
    CHECK_THROWS_AS(problem_to_json(p), Error);
}

TEST_CASE("schedule json round trip") {
    GraphSchedule original = make_ring_partition_schedule(5, 3, 0.7);
    GraphSchedule parsed = schedule_from_json(schedule_to_json(original));
    CHECK(parsed.n_agents == 5);
    CHECK(parsed.window == 3);
    CHECK(parsed.min_weight == original.min_weight);
    REQUIRE(parsed.period() == 3);
    for (int r = 0; r < 3; ++r) {
        CHECK(parsed.rounds[static_cast<std::size_t>(r)].edges ==
              original.rounds[static_cast<std::size_t>(r)].edges);
        CHECK((parsed.rounds[static_cast<std::size_t>(r)].mixing -
               original.rounds[static_cast<std::size_t>(r)].mixing)
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
    }
    CHECK(verify_mixing(parsed).ok);
    CHECK(verify_b_connectivity(parsed, 3));
}

TEST_CASE("schedule json rejects bad edges") {
    CHECK_THROWS_AS(schedule_from_json(R"({"n_agents": 2, "window": 1,
        "rounds": [{"edges": [[0, 5]], "mixing": [[1, 0], [0, 1]]}]})"),
                    Error);
    CHECK_THROWS_AS(schedule_from_json(R"({"n_agents": 2, "rounds": []})"), Error);
}

TEST_CASE("run csv writes, reads back, and verifies") {
    CoupledProblem p = make_resource_family(4, 3);
    GraphSchedule s = make_ring_partition_schedule(4, 2, 1.0);
    RunConfig cfg;
    cfg.horizon = 150;
    cfg.seed = 3;
    RunResult run = run_bdpp(p, s, ParamSchedule::sqrt_schedule(0.27), cfg);

    auto path = temp_file("bdpp_test_run.csv");
    write_run_csv(run, path.string());
    std::vector<CsvRow> rows = read_run_csv(path.string());
    REQUIRE(rows.size() == run.records.size());
    CHECK(rows.front().t == 1);
    CHECK(rows.back().t == 150);
    CHECK(rows.back().objective_error ==
          run.records.back().objective_error);  // %.17g survives the round trip
    CHECK(rows.back().violation.size() == 1);

    CsvCheck check = verify_run_csv(path.string());
    CHECK(check.ok);
    CHECK(check.rows == 150);
    std::filesystem::remove(path);
}

TEST_CASE("csv verifier flags violated invariants") {
    auto path = temp_file("bdpp_test_bad.csv");
    {
        std::ofstream out(path);
        out << "t,objective_error,violation_1,queue_sum_norm,drift,drift_bound,lemma1_slack_min\n";
        out << "1,0.5,0.1,1.0,2.0,1.0,0.5\n";  // drift above its bound
    }
    CsvCheck check = verify_run_csv(path.string());
    CHECK_FALSE(check.ok);
    CHECK(check.detail.find("drift") != std::string::npos);

    {
        std::ofstream out(path);
        out << "t,objective_error,violation_1,queue_sum_norm,drift,drift_bound,lemma1_slack_min\n";
        out << "1,0.5,0.1,1.0,0.5,1.0,-0.5\n";  // negative slack
    }
    check = verify_run_csv(path.string());
    CHECK_FALSE(check.ok);
    CHECK(check.detail.find("lemma1_slack_min") != std::string::npos);

    {
        std::ofstream out(path);
        out << "t,objective_error,violation_1,queue_sum_norm,drift,drift_bound,lemma1_slack_min\n";
        out << "1,0.5,0.1,1.0,0.5,nan,nan\n";  // undefined diagnostics skipped
    }
    check = verify_run_csv(path.string());
    CHECK(check.ok);

    {
        std::ofstream out(path);
        out << "t,objective_error\n1,abc\n";
    }
    CHECK_THROWS_AS(verify_run_csv(path.string()), Error);
    std::filesystem::remove(path);
}

TEST_CASE("summary json carries the run outcome") {
    CoupledProblem p = make_resource_family(4, 3);
    GraphSchedule s = make_ring_partition_schedule(4, 2, 1.0);
    RunConfig cfg;
    cfg.horizon = 100;
    cfg.seed = 3;
    cfg.f_star = 0.25;
    RunResult run = run_bdpp(p, s, ParamSchedule::sqrt_schedule(0.27), cfg);
    nlohmann::json j = nlohmann::json::parse(run_summary_json(run));
    CHECK(j.at("algorithm") == "bdpp");
    CHECK(j.at("horizon") == 100);
    CHECK(j.at("f_star") == 0.25);
    CHECK(j.contains("final_objective_error"));
    CHECK(j.contains("first_feasible_t"));
    CHECK(j.at("min_lemma1_slack").get<double>() >= -1e-9);
}

TEST_SUITE_END();
