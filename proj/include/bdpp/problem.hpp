#ifndef BDPP_PROBLEM_HPP
#define BDPP_PROBLEM_HPP

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "bdpp/rng.hpp"

namespace bdpp {

// ============================================================================
// Constraint-coupled problem instance:
//
//   minimize    sum_i f_i(x_i)
//   subject to  sum_i g_i(x_i) <= 0   (p coupled rows)
//               x_i in X_i            (boxes)
//
// All types are immutable after construction; every operation here is a pure
// function and safe to call concurrently.
// ============================================================================

/// Axis-aligned box { x : lower <= x <= upper }, the local feasible set.
struct BoxSet {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    static BoxSet scalar(double lo, double hi);

    int dim() const { return static_cast<int>(lower.size()); }

    /// Euclidean norm of (upper - lower).
    double diameter() const { return (upper - lower).norm(); }

    Eigen::VectorXd project(const Eigen::VectorXd& x) const;
    bool contains(const Eigen::VectorXd& x, double tol = 0.0) const;
    Eigen::VectorXd sample(Rng& rng) const;

    /// Throws Validation unless lower <= upper componentwise and all entries
    /// are finite.
    void validate() const;
};

/// Convex scalar-valued function of a vector argument. Built-in kinds come
/// with exact evaluation, subgradients, and exact extrema over boxes; Custom
/// supplies callbacks and is handled by sampling.
struct ScalarConvexFn {
    enum class Kind { Quadratic, Affine, Custom };

    using ValueFn = std::function<double(const Eigen::VectorXd&)>;
    using SubgradFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

    Kind kind = Kind::Quadratic;

    // Quadratic: (weight/2) * ||x - center||^2, weight >= 0
    Eigen::VectorXd center;
    double weight = 0.0;

    // Affine: slope . x + offset
    Eigen::VectorXd slope;
    double offset = 0.0;

    // Custom
    ValueFn value_fn;
    SubgradFn subgrad_fn;

    static ScalarConvexFn quadratic(Eigen::VectorXd center, double weight);
    static ScalarConvexFn affine(Eigen::VectorXd slope, double offset);
    static ScalarConvexFn custom(ValueFn value, SubgradFn subgrad);

    double value(const Eigen::VectorXd& x) const;
    Eigen::VectorXd subgradient(const Eigen::VectorXd& x) const;

    int dim() const;
    void validate(int expected_dim) const;
};

/// The p rows of one agent's constraint map g_i : R^{d_i} -> R^p.
struct ConstraintMap {
    std::vector<ScalarConvexFn> rows;

    int dim() const { return static_cast<int>(rows.size()); }

    Eigen::VectorXd value(const Eigen::VectorXd& x) const;
};

/// One agent: local objective f_i, constraint map g_i, feasible box X_i.
struct AgentProblem {
    ScalarConvexFn objective;
    ConstraintMap constraint;
    BoxSet feasible_set;
    int dim = 0;

    void validate() const;
};

/// The coupled instance shared by all algorithms in this library.
struct CoupledProblem {
    std::vector<AgentProblem> agents;
    int constraint_dim = 0;
    std::optional<std::vector<Eigen::VectorXd>> slater_point;

    int num_agents() const { return static_cast<int>(agents.size()); }

    void validate() const;
};

/// Evaluates (sum_i f_i(x_i), sum_i g_i(x_i)); summation in agent-index order
/// so results are reproducible bit for bit.
std::pair<double, Eigen::VectorXd> eval_global(const CoupledProblem& problem,
                                               const std::vector<Eigen::VectorXd>& x);

/// Strict-feasibility margin of the stored interior point: the largest s with
/// sum_i g_i(x_hat_i) <= -s * 1, clamped at zero. Throws NotAvailable when no
/// interior point is stored.
double slater_slack(const CoupledProblem& problem);

struct ProblemConstants {
    double F = 0.0;  // max_i max_{x in X_i} ||g_i(x)||
    double G = 0.0;  // max_i (max f_i - min f_i) over X_i
    double R = 0.0;  // max_i diameter(X_i)
    bool exact = true;  // false when any Custom part forced sampling
};

/// Extremal constants of the instance. Exact for Quadratic/Affine parts
/// (vertex/interval evaluation over the boxes, d_i <= 24); grid-sampled and
/// flagged inexact when Custom callbacks are involved.
ProblemConstants problem_constants(const CoupledProblem& problem);

}  // namespace bdpp

#endif
