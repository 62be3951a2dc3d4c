#ifndef BDPP_ORACLE_HPP
#define BDPP_ORACLE_HPP

#include <Eigen/Dense>
#include <vector>

#include "bdpp/problem.hpp"

namespace bdpp {

struct OracleResult {
    std::vector<Eigen::VectorXd> x_star;
    double f_star = 0.0;
    Eigen::VectorXd lambda_star;
    double kkt_residual = 0.0;  // max of primal violation, complementary slackness
    long iters = 0;
};

/// Reference solution of the coupled problem for instances with Quadratic
/// objectives (positive weight) and Affine constraint rows over boxes.
///
/// For p = 1 the per-agent minimizer at a multiplier value is a clipped
/// stationary point and the summed constraint is monotone in the multiplier,
/// so the optimal multiplier comes from bisection; complementary slackness is
/// certified at the returned point. For p > 1 a projected-gradient ascent on
/// the dual runs until the gradient mapping falls below tol, with the same
/// certificate. Throws Infeasible when no box point satisfies the coupled
/// constraint.
OracleResult kkt_oracle(const CoupledProblem& problem, double tol);

}  // namespace bdpp

#endif
