#include "bdpp/local_solver.hpp"

#include <cmath>
#include <limits>

#include "bdpp/error.hpp"

namespace bdpp {

namespace {

bool is_builtin(const ScalarConvexFn& f) { return f.kind != ScalarConvexFn::Kind::Custom; }

bool builtin_only(const AgentProblem& agent) {
    if (!is_builtin(agent.objective)) return false;
    for (const auto& row : agent.constraint.rows)
        if (!is_builtin(row)) return false;
    return true;
}

bool affine_rows(const AgentProblem& agent) {
    for (const auto& row : agent.constraint.rows)
        if (row.kind != ScalarConvexFn::Kind::Affine) return false;
    return true;
}

// Combined linear term contributed by the penalized constraint rows.
Eigen::VectorXd queue_slope(const AgentProblem& agent, const Eigen::VectorXd& queue) {
    Eigen::VectorXd lin = Eigen::VectorXd::Zero(agent.dim);
    for (std::size_t r = 0; r < agent.constraint.rows.size(); ++r)
        lin += queue[static_cast<Eigen::Index>(r)] * agent.constraint.rows[r].slope;
    return lin;
}

}  // namespace

double SubproblemSpec::objective(const Eigen::VectorXd& x) const {
    double s = v * agent->objective.value(x);
    s += queue.dot(agent->constraint.value(x));
    s += eta * (x - anchor).squaredNorm();
    return s;
}

Eigen::VectorXd SubproblemSpec::subgradient(const Eigen::VectorXd& x) const {
    Eigen::VectorXd s = v * agent->objective.subgradient(x);
    for (std::size_t r = 0; r < agent->constraint.rows.size(); ++r)
        s += queue[static_cast<Eigen::Index>(r)] * agent->constraint.rows[r].subgradient(x);
    s += 2.0 * eta * (x - anchor);
    return s;
}

void SubproblemSpec::validate() const {
    if (agent == nullptr) throw Error(ErrorCode::InvalidInput, "subproblem: no agent");
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidInput, "subproblem: v must be > 0");
    if (!(eta > 0.0)) throw Error(ErrorCode::InvalidInput, "subproblem: eta must be > 0");
    if (queue.size() != agent->constraint.dim())
        throw Error(ErrorCode::InvalidInput, "subproblem: queue dimension mismatch");
    if ((queue.array() < 0.0).any())
        throw Error(ErrorCode::InvalidInput, "subproblem: queue must be nonnegative");
    if (!agent->feasible_set.contains(anchor, 1e-9))
        throw Error(ErrorCode::InvalidInput, "subproblem: anchor outside the box");
}

Eigen::VectorXd solve_closed_form(const SubproblemSpec& spec) {
    spec.validate();
    const AgentProblem& agent = *spec.agent;
    const auto& obj = agent.objective;
    if (obj.kind == ScalarConvexFn::Kind::Custom || !affine_rows(agent))
        throw Error(ErrorCode::Unsupported, "closed form needs a quadratic/affine objective and affine rows");

    Eigen::VectorXd lin = queue_slope(agent, spec.queue);
    double quad = 2.0 * spec.eta;
    Eigen::VectorXd numerator = 2.0 * spec.eta * spec.anchor - lin;
    if (obj.kind == ScalarConvexFn::Kind::Quadratic) {
        quad += spec.v * obj.weight;
        numerator += spec.v * obj.weight * obj.center;
    } else {
        numerator -= spec.v * obj.slope;
    }
    return agent.feasible_set.project(numerator / quad);
}

ProjectedResult solve_projected(const SubproblemSpec& spec, double tol, long max_iters) {
    spec.validate();
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidInput, "solve_projected: tol must be > 0");
    const BoxSet& box = spec.agent->feasible_set;
    const bool smooth = builtin_only(*spec.agent);

    ProjectedResult result;
    Eigen::VectorXd x = box.project(spec.anchor);
    double fx = spec.objective(x);
    Eigen::VectorXd best_x = x;
    double best_f = fx;
    double step = 1.0 / (2.0 * spec.eta);

    for (long k = 0; k < max_iters; ++k) {
        Eigen::VectorXd grad = spec.subgradient(x);
        Eigen::VectorXd next;
        if (smooth) {
            // Backtracking projected gradient; the eta term makes the
            // objective strongly convex, so this contracts linearly.
            for (;;) {
                next = box.project(x - step * grad);
                Eigen::VectorXd d = next - x;
                double fn = spec.objective(next);
                if (fn <= fx + grad.dot(d) + d.squaredNorm() / (2.0 * step) + 1e-300) break;
                step *= 0.5;
                if (step < 1e-18) { next = x; break; }
            }
            step = std::min(step * 1.5, 1e6);
        } else {
            double alpha = 1.0 / (2.0 * spec.eta * static_cast<double>(k + 1));
            next = box.project(x - alpha * grad);
        }

        double fn = spec.objective(next);
        if (fn < best_f) {
            best_f = fn;
            best_x = next;
        }
        result.iters = k + 1;
        const double step_norm = (next - x).norm();
        result.certified_gap = step_norm * grad.norm();
        x = next;
        fx = fn;
        // Smooth instances converge linearly, so also drive the step itself
        // below tol; the gap certificate alone can stop while the iterate is
        // still ~sqrt(tol/eta) away when eta is small.
        if (result.certified_gap <= tol && (!smooth || step_norm <= tol)) {
            result.converged = true;
            break;
        }
    }
    result.x = best_x;
    return result;
}

Eigen::VectorXd solve_subproblem(const SubproblemSpec& spec, bool* warning) {
    try {
        return solve_closed_form(spec);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::Unsupported) throw;
    }
    ProjectedResult r = solve_projected(spec, 1e-10, 100000);
    if (!r.converged && warning != nullptr) *warning = true;
    return r.x;
}

Eigen::VectorXd argmin_box_penalized(const AgentProblem& agent, double v,
                                     const Eigen::VectorXd& multiplier) {
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidInput, "argmin_box_penalized: v must be > 0");
    if (multiplier.size() != agent.constraint.dim())
        throw Error(ErrorCode::InvalidInput, "argmin_box_penalized: multiplier dimension mismatch");
    if (!affine_rows(agent))
        throw Error(ErrorCode::Unsupported, "argmin_box_penalized: constraint rows must be affine");

    const auto& obj = agent.objective;
    Eigen::VectorXd lin = queue_slope(agent, multiplier);
    const BoxSet& box = agent.feasible_set;

    if (obj.kind == ScalarConvexFn::Kind::Quadratic && obj.weight > 0.0)
        return box.project(obj.center - lin / (v * obj.weight));

    Eigen::VectorXd slope = lin;
    if (obj.kind == ScalarConvexFn::Kind::Affine)
        slope += v * obj.slope;
    else if (obj.kind != ScalarConvexFn::Kind::Quadratic)
        throw Error(ErrorCode::Unsupported, "argmin_box_penalized: objective kind not handled");

    // Pure linear objective over a box: decide each coordinate by slope sign
    // (ties take the lower bound).
    Eigen::VectorXd x(agent.dim);
    for (int j = 0; j < agent.dim; ++j)
        x[j] = slope[j] > 0.0 ? box.lower[j] : (slope[j] < 0.0 ? box.upper[j] : box.lower[j]);
    return x;
}

}  // namespace bdpp
