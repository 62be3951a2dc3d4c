#ifndef BDPP_LOCAL_SOLVER_HPP
#define BDPP_LOCAL_SOLVER_HPP

#include <Eigen/Dense>

#include "bdpp/problem.hpp"

namespace bdpp {

/// One agent's per-iteration subproblem:
///
///   minimize over x in X_i :
///     v * f_i(x) + <queue, g_i(x)> + eta * ||x - anchor||^2
///
/// Note the proximal term carries no 1/2 factor, so stationarity equations
/// use 2*eta.
struct SubproblemSpec {
    const AgentProblem* agent = nullptr;
    double v = 1.0;             // trade-off weight, > 0
    Eigen::VectorXd queue;      // componentwise >= 0
    double eta = 1.0;           // proximal weight, > 0
    Eigen::VectorXd anchor;     // previous iterate, inside the box

    double objective(const Eigen::VectorXd& x) const;
    Eigen::VectorXd subgradient(const Eigen::VectorXd& x) const;
    void validate() const;
};

/// Exact minimizer when the objective is Quadratic or Affine and every
/// constraint row is Affine: the subproblem is then an isotropic quadratic
/// plus affine terms, separable per coordinate, so clipping the stationary
/// point to the box is exact. Throws Unsupported for other kinds.
Eigen::VectorXd solve_closed_form(const SubproblemSpec& spec);

struct ProjectedResult {
    Eigen::VectorXd x;
    long iters = 0;
    bool converged = false;
    double certified_gap = 0.0;  // ||step|| * ||subgradient|| at termination
};

/// Generic fallback: projected (sub)gradient descent on the strongly convex
/// subproblem objective. Smooth instances use a backtracking gradient step;
/// Custom kinds fall back to diminishing subgradient steps and may exhaust
/// max_iters, in which case the best iterate is returned with
/// converged = false.
ProjectedResult solve_projected(const SubproblemSpec& spec, double tol, long max_iters);

/// Closed form when possible, projected fallback otherwise (tol 1e-10,
/// max_iters 1e5). `warning` is set when the fallback stopped on max_iters.
Eigen::VectorXd solve_subproblem(const SubproblemSpec& spec, bool* warning = nullptr);

/// Exact minimizer over the box of v * f_i(x) + <multiplier, g_i(x)> with no
/// proximal term. Requires an Affine or Quadratic objective and Affine
/// constraint rows; a Quadratic objective must have positive weight unless
/// the combined linear slope decides every coordinate.
Eigen::VectorXd argmin_box_penalized(const AgentProblem& agent, double v,
                                     const Eigen::VectorXd& multiplier);

}  // namespace bdpp

#endif
