#include "bdpp/oracle.hpp"

#include <cmath>

#include "bdpp/error.hpp"

namespace bdpp {

namespace {

void check_supported(const CoupledProblem& problem) {
    problem.validate();
    for (const auto& agent : problem.agents) {
        if (agent.objective.kind != ScalarConvexFn::Kind::Quadratic ||
            !(agent.objective.weight > 0.0))
            throw Error(ErrorCode::Unsupported,
                        "kkt_oracle: objectives must be quadratic with positive weight");
        for (const auto& row : agent.constraint.rows)
            if (row.kind != ScalarConvexFn::Kind::Affine)
                throw Error(ErrorCode::Unsupported, "kkt_oracle: constraint rows must be affine");
    }
}

// Per-agent minimizer of f_i + <lambda, g_i> over the box: a clipped
// stationary point, unique because the quadratic weight is positive.
Eigen::VectorXd agent_minimizer(const AgentProblem& agent, const Eigen::VectorXd& lambda) {
    Eigen::VectorXd lin = Eigen::VectorXd::Zero(agent.dim);
    for (std::size_t r = 0; r < agent.constraint.rows.size(); ++r)
        lin += lambda[static_cast<Eigen::Index>(r)] * agent.constraint.rows[r].slope;
    return agent.feasible_set.project(agent.objective.center - lin / agent.objective.weight);
}

Eigen::VectorXd summed_constraint(const CoupledProblem& problem, const Eigen::VectorXd& lambda,
                                  std::vector<Eigen::VectorXd>* x_out) {
    Eigen::VectorXd total = Eigen::VectorXd::Zero(problem.constraint_dim);
    for (int i = 0; i < problem.num_agents(); ++i) {
        const auto& agent = problem.agents[static_cast<std::size_t>(i)];
        Eigen::VectorXd xi = agent_minimizer(agent, lambda);
        total += agent.constraint.value(xi);
        if (x_out) (*x_out)[static_cast<std::size_t>(i)] = std::move(xi);
    }
    return total;
}

// Exact minimum of each summed constraint row over the product box
// (separable: affine rows minimize coordinatewise at a bound).
Eigen::VectorXd constraint_row_minima(const CoupledProblem& problem) {
    Eigen::VectorXd mins = Eigen::VectorXd::Zero(problem.constraint_dim);
    for (const auto& agent : problem.agents) {
        for (int r = 0; r < agent.constraint.dim(); ++r) {
            const auto& row = agent.constraint.rows[static_cast<std::size_t>(r)];
            double m = row.offset;
            for (int j = 0; j < agent.dim; ++j)
                m += std::min(row.slope[j] * agent.feasible_set.lower[j],
                              row.slope[j] * agent.feasible_set.upper[j]);
            mins[r] += m;
        }
    }
    return mins;
}

OracleResult finish(const CoupledProblem& problem, const Eigen::VectorXd& lambda, long iters) {
    OracleResult out;
    out.lambda_star = lambda;
    out.iters = iters;
    out.x_star.resize(static_cast<std::size_t>(problem.num_agents()));
    Eigen::VectorXd h = summed_constraint(problem, lambda, &out.x_star);
    out.f_star = 0.0;
    for (int i = 0; i < problem.num_agents(); ++i)
        out.f_star += problem.agents[static_cast<std::size_t>(i)].objective.value(
            out.x_star[static_cast<std::size_t>(i)]);

    double primal = std::max(0.0, h.maxCoeff());
    double comp_slack = 0.0;
    for (Eigen::Index r = 0; r < h.size(); ++r)
        comp_slack = std::max(comp_slack, std::abs(lambda[r] * h[r]));
    out.kkt_residual = std::max(primal, comp_slack);
    return out;
}

OracleResult solve_single_row(const CoupledProblem& problem, double tol) {
    std::vector<Eigen::VectorXd> scratch(static_cast<std::size_t>(problem.num_agents()));
    auto h = [&](double lam) {
        return summed_constraint(problem, Eigen::VectorXd::Constant(1, lam), &scratch)[0];
    };

    if (constraint_row_minima(problem)[0] > tol)
        throw Error(ErrorCode::Infeasible, "kkt_oracle: no box point satisfies the constraint");

    if (h(0.0) <= 0.0) return finish(problem, Eigen::VectorXd::Zero(1), 0);

    double lo = 0.0, hi = 1.0;
    long iters = 0;
    while (h(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        ++iters;
        if (hi > 1e15)
            throw Error(ErrorCode::Infeasible,
                        "kkt_oracle: constraint stays violated as the multiplier grows");
    }
    // h is continuous, piecewise linear, nonincreasing; bisect to the root.
    while (hi - lo > 1e-14 * std::max(1.0, hi) && iters < 2000) {
        double mid = 0.5 * (lo + hi);
        (h(mid) > 0.0 ? lo : hi) = mid;
        ++iters;
    }
    // hi sits on the feasible side of the root.
    return finish(problem, Eigen::VectorXd::Constant(1, hi), iters);
}

OracleResult solve_multi_row(const CoupledProblem& problem, double tol) {
    // Lipschitz constant of the dual gradient: sum_i ||D_i||^2 / w_i with the
    // Frobenius norm as a safe upper bound on the spectral norm.
    double lip = 0.0;
    for (const auto& agent : problem.agents) {
        double fro2 = 0.0;
        for (const auto& row : agent.constraint.rows) fro2 += row.slope.squaredNorm();
        lip += fro2 / agent.objective.weight;
    }
    if (!(lip > 0.0)) lip = 1.0;
    const double step = 1.0 / lip;

    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(problem.constraint_dim);
    const long max_iters = 500000;
    long k = 0;
    for (; k < max_iters; ++k) {
        Eigen::VectorXd grad = summed_constraint(problem, lambda, nullptr);
        Eigen::VectorXd next = (lambda + step * grad).cwiseMax(0.0);
        double mapping = (next - lambda).norm() * lip;
        lambda = std::move(next);
        if (mapping <= tol) break;
        if (lambda.norm() > 1e10)
            throw Error(ErrorCode::Infeasible,
                        "kkt_oracle: dual iterates diverge; instance looks infeasible");
    }
    return finish(problem, lambda, k);
}

}  // namespace

OracleResult kkt_oracle(const CoupledProblem& problem, double tol) {
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidInput, "kkt_oracle: tol must be > 0");
    check_supported(problem);
    if (problem.constraint_dim == 1) return solve_single_row(problem, tol);
    return solve_multi_row(problem, tol);
}

}  // namespace bdpp
