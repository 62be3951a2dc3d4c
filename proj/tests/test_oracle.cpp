#include <doctest.h>

#include <cmath>

#include "bdpp/error.hpp"
#include "bdpp/family.hpp"
#include "bdpp/oracle.hpp"
#include "support.hpp"

using namespace bdpp;

namespace {

Eigen::VectorXd vec1(double x) { return Eigen::VectorXd::Constant(1, x); }

}  // namespace

TEST_SUITE_BEGIN("oracle");

TEST_CASE("two-agent instance with a known multiplier") {
    // f_i = (x_i - a_i)^2 / 2 with a = (1, 2), g_i = x_i - 1 (sum x <= 2):
    // x_i(l) = a_i - l, sum = 3 - 2l = 2 -> l = 1/2, x = (0.5, 1.5), f = 1/4
    CoupledProblem p;
    p.constraint_dim = 1;
    p.agents.push_back(testsup::scalar_agent(1.0, 1.0, 1.0, -1.0, 0.0, 2.0));
    p.agents.push_back(testsup::scalar_agent(2.0, 1.0, 1.0, -1.0, 0.0, 2.0));
    OracleResult sol = kkt_oracle(p, 1e-10);
    CHECK(sol.lambda_star[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(sol.x_star[0][0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(sol.x_star[1][0] == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(sol.f_star == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(sol.kkt_residual <= 1e-10);

    testsup::GridSolution grid = testsup::grid_min_coupled(p, 1e-3);
    REQUIRE(grid.found);
    CHECK(sol.f_star == doctest::Approx(grid.objective).epsilon(1e-6));
}

TEST_CASE("slack capacity leaves the multiplier at zero") {
    CoupledProblem p;
    p.constraint_dim = 1;
    p.agents.push_back(testsup::scalar_agent(1.0, 1.0, 1.0, -50.0, 0.0, 2.0));
    p.agents.push_back(testsup::scalar_agent(3.0, 1.0, 1.0, -50.0, 0.0, 2.0));
    OracleResult sol = kkt_oracle(p, 1e-10);
    CHECK(sol.lambda_star[0] == 0.0);
    CHECK(sol.x_star[0][0] == doctest::Approx(1.0));
    CHECK(sol.x_star[1][0] == doctest::Approx(2.0));  // clipped center
}

TEST_CASE("infeasible instance is detected") {
    CoupledProblem p = testsup::single_agent_problem(1.0, 1.0, 1.0, 1.0, 0.0, 2.0);
    // g(x) = x + 1 >= 1 on the whole box
    CHECK_THROWS_AS(kkt_oracle(p, 1e-10), Error);
}

TEST_CASE("unsupported kinds are rejected") {
    CoupledProblem p = testsup::single_agent_problem(1.0, 0.0, 1.0, -1.0, 0.0, 2.0);
    CHECK_THROWS_AS(kkt_oracle(p, 1e-10), Error);  // weight 0

    CoupledProblem q = testsup::single_agent_problem(1.0, 1.0, 1.0, -1.0, 0.0, 2.0);
    q.agents[0].constraint.rows[0] = ScalarConvexFn::quadratic(vec1(0.0), 1.0);
    CHECK_THROWS_AS(kkt_oracle(q, 1e-10), Error);  // non-affine row
}

TEST_CASE("matches refined grid search on random two-agent instances") {
    Rng rng(404);
    for (int k = 0; k < 20; ++k) {
        CoupledProblem p = testsup::random_coupled(rng, 2);
        OracleResult sol = kkt_oracle(p, 1e-10);
        testsup::GridSolution grid = testsup::grid_min_coupled(p, 1e-3);
        REQUIRE(grid.found);
        CAPTURE(k);
        CHECK(std::fabs(sol.f_star - grid.objective) <= 1e-4);
        CHECK(sol.kkt_residual <= 1e-8);
    }
}

TEST_CASE("kkt residuals stay tiny on ten-agent instances") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        CoupledProblem p = make_resource_family(10, seed);
        OracleResult sol = kkt_oracle(p, 1e-10);
        CAPTURE(seed);
        CHECK(sol.kkt_residual <= 1e-8);
        // stationarity holds by construction; check primal feasibility and
        // complementary slackness explicitly as well
        Eigen::VectorXd total = Eigen::VectorXd::Zero(1);
        for (int i = 0; i < 10; ++i)
            total += p.agents[static_cast<std::size_t>(i)].constraint.value(sol.x_star[static_cast<std::size_t>(i)]);
        CHECK(total[0] <= 1e-9);
        CHECK(std::fabs(sol.lambda_star[0] * total[0]) <= 1e-8);
    }
}

TEST_CASE("two-agent projections of a ten-agent solution are optimal") {
    // fix all but two agents at the solver's answer and brute-force the
    // remaining two-dimensional problem over the residual capacity
    CoupledProblem p = make_resource_family(10, 4);
    OracleResult sol = kkt_oracle(p, 1e-12);
    for (auto [i, j] : {std::pair<int, int>{0, 1}, {3, 7}, {5, 9}}) {
        CoupledProblem restricted;
        restricted.constraint_dim = 1;
        double fixed_g = 0.0, fixed_f = 0.0;
        for (int k = 0; k < 10; ++k) {
            if (k == i || k == j) {
                restricted.agents.push_back(p.agents[static_cast<std::size_t>(k)]);
            } else {
                fixed_g += p.agents[static_cast<std::size_t>(k)]
                               .constraint.value(sol.x_star[static_cast<std::size_t>(k)])[0];
                fixed_f += p.agents[static_cast<std::size_t>(k)]
                               .objective.value(sol.x_star[static_cast<std::size_t>(k)]);
            }
        }
        // absorb the fixed agents' usage into the first row's offset
        restricted.agents[0].constraint.rows[0].offset += fixed_g;
        testsup::GridSolution grid = testsup::grid_min_coupled(restricted, 1e-3);
        REQUIRE(grid.found);
        double f_restricted = sol.f_star - fixed_f;
        CAPTURE(i);
        CAPTURE(j);
        CHECK(f_restricted <= grid.objective + 1e-4);
    }
}

TEST_CASE("two coupled rows solve through the dual ascent path") {
    // three scalar agents, two independent capacity rows
    CoupledProblem p;
    p.constraint_dim = 2;
    for (int i = 0; i < 3; ++i) {
        AgentProblem agent = testsup::scalar_agent(1.5, 1.0 + 0.3 * i, 1.0, -0.4, 0.0, 2.0);
        agent.constraint.rows.push_back(
            ScalarConvexFn::affine(vec1(0.5 + 0.25 * i), -0.5));
        p.agents.push_back(agent);
    }
    OracleResult sol = kkt_oracle(p, 1e-9);
    CHECK(sol.kkt_residual <= 1e-7);

    // coarse first pass; the refinement passes supply the accuracy
    testsup::GridSolution grid = testsup::grid_min_coupled(p, 1e-2);
    REQUIRE(grid.found);
    CHECK(sol.f_star <= grid.objective + 1e-4);
}

TEST_SUITE_END();
