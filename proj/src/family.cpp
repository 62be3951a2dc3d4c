#include "bdpp/family.hpp"

#include "bdpp/error.hpp"

namespace bdpp {

CoupledProblem make_resource_family(int n_agents, std::uint64_t seed) {
    if (n_agents < 1)
        throw Error(ErrorCode::InvalidInput, "resource family: need at least 1 agent");
    Rng rng(seed);
    const double r_total = rng.uniform(5.0, 20.0);

    CoupledProblem problem;
    problem.constraint_dim = 1;
    std::vector<Eigen::VectorXd> interior;
    for (int i = 0; i < n_agents; ++i) {
        const double a = rng.uniform(1.0, 2.0);
        const double d = rng.uniform(0.5, 1.0);
        AgentProblem agent;
        agent.dim = 1;
        agent.objective = ScalarConvexFn::quadratic(Eigen::VectorXd::Constant(1, a), 1.0);
        agent.constraint.rows.push_back(ScalarConvexFn::affine(
            Eigen::VectorXd::Constant(1, d), -r_total / static_cast<double>(n_agents)));
        agent.feasible_set = BoxSet::scalar(0.0, 2.0);
        problem.agents.push_back(std::move(agent));
        interior.push_back(Eigen::VectorXd::Zero(1));
    }
    problem.slater_point = std::move(interior);
    problem.validate();
    return problem;
}

}  // namespace bdpp
