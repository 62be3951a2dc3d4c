#ifndef BDPP_TESTS_SUPPORT_HPP
#define BDPP_TESTS_SUPPORT_HPP

// Shared instance builders and brute-force oracles. The oracles here evaluate
// objective callbacks directly and never call the solvers they check.

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "bdpp/problem.hpp"
#include "bdpp/rng.hpp"

namespace testsup {

/// Scalar agent with objective (w/2)(x-a)^2 and one affine row d*x + o on [lo, hi].
inline bdpp::AgentProblem scalar_agent(double a, double w, double d, double o, double lo,
                                       double hi) {
    bdpp::AgentProblem agent;
    agent.dim = 1;
    agent.objective = bdpp::ScalarConvexFn::quadratic(Eigen::VectorXd::Constant(1, a), w);
    agent.constraint.rows.push_back(
        bdpp::ScalarConvexFn::affine(Eigen::VectorXd::Constant(1, d), o));
    agent.feasible_set = bdpp::BoxSet::scalar(lo, hi);
    return agent;
}

inline bdpp::CoupledProblem single_agent_problem(double a, double w, double d, double o,
                                                 double lo, double hi) {
    bdpp::CoupledProblem p;
    p.agents.push_back(scalar_agent(a, w, d, o, lo, hi));
    p.constraint_dim = 1;
    return p;
}

/// Grid minimizer of a 1-D function over [lo, hi], refined around the best
/// point until the step shrinks below 1e-10.
inline double grid_min_1d(const std::function<double(double)>& f, double lo, double hi) {
    double best_x = lo;
    double best_f = std::numeric_limits<double>::infinity();
    double step = (hi - lo) / 2000.0;
    double a = lo, b = hi;
    while (true) {
        for (double x = a; x <= b + 0.5 * step; x += step) {
            double xx = std::min(std::max(x, lo), hi);
            double v = f(xx);
            if (v < best_f) {
                best_f = v;
                best_x = xx;
            }
        }
        if (step < 1e-10) break;
        a = std::max(lo, best_x - 2.0 * step);
        b = std::min(hi, best_x + 2.0 * step);
        step = std::max((b - a) / 2000.0, step / 500.0);
    }
    return best_x;
}

struct GridSolution {
    double objective = std::numeric_limits<double>::infinity();
    std::vector<double> x;
    bool found = false;
};

/// Exhaustive feasible-grid minimum for scalar-agent coupled instances:
/// full scan at `coarse` resolution, then two local refinements around the
/// incumbent. Recursion enumerates the product grid.
inline GridSolution grid_min_coupled(const bdpp::CoupledProblem& problem, double coarse) {
    const int n = problem.num_agents();
    std::vector<double> lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
        lo[i] = problem.agents[i].feasible_set.lower[0];
        hi[i] = problem.agents[i].feasible_set.upper[0];
    }

    GridSolution best;
    std::vector<double> point(n);
    std::function<void(int, double, const Eigen::VectorXd&, const std::vector<double>&,
                       const std::vector<double>&, double)>
        scan = [&](int i, double obj, const Eigen::VectorXd& cons, const std::vector<double>& a,
                   const std::vector<double>& b, double step) {
            if (i == n) {
                if ((cons.array() <= 1e-12).all() && obj < best.objective) {
                    best.objective = obj;
                    best.x = point;
                    best.found = true;
                }
                return;
            }
            Eigen::VectorXd xi(1);
            for (double x = a[i]; x <= b[i] + 0.5 * step; x += step) {
                double xx = std::min(std::max(x, lo[i]), hi[i]);
                xi[0] = xx;
                point[i] = xx;
                scan(i + 1, obj + problem.agents[i].objective.value(xi),
                     cons + problem.agents[i].constraint.value(xi), a, b, step);
            }
        };

    double step = coarse;
    std::vector<double> a = lo, b = hi;
    for (int pass = 0; pass < 3; ++pass) {
        scan(0, 0.0, Eigen::VectorXd::Zero(problem.constraint_dim), a, b, step);
        if (!best.found) break;
        for (int i = 0; i < n; ++i) {
            a[i] = std::max(lo[i], best.x[i] - 2.0 * step);
            b[i] = std::min(hi[i], best.x[i] + 2.0 * step);
        }
        step /= 100.0;
    }
    return best;
}

/// Random feasible scalar-agent instance for oracle cross-checks (weights,
/// centers, slopes, offsets, and box all drawn from the rng).
inline bdpp::CoupledProblem random_coupled(bdpp::Rng& rng, int n_agents) {
    while (true) {
        bdpp::CoupledProblem p;
        p.constraint_dim = 1;
        double min_sum = 0.0;
        for (int i = 0; i < n_agents; ++i) {
            double lo = rng.uniform(-1.0, 0.5);
            double hi = lo + rng.uniform(0.5, 2.5);
            double a = rng.uniform(lo - 0.5, hi + 0.5);
            double w = rng.uniform(0.3, 3.0);
            double d = rng.uniform(-1.5, 1.5);
            if (std::fabs(d) < 0.1) d = 0.1;
            double o = rng.uniform(-1.0, 0.5);
            p.agents.push_back(scalar_agent(a, w, d, o, lo, hi));
            min_sum += std::min(d * lo, d * hi) + o;
        }
        if (min_sum <= -0.05) return p;  // strictly feasible somewhere
    }
}

}  // namespace testsup

#endif
