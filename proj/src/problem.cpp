#include "bdpp/problem.hpp"

#include <cmath>
#include <limits>

#include "bdpp/error.hpp"

namespace bdpp {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::InvalidInput, msg); }

}  // namespace

// ---------------------------------------------------------------------------
// BoxSet
// ---------------------------------------------------------------------------

BoxSet BoxSet::scalar(double lo, double hi) {
    BoxSet box;
    box.lower = Eigen::VectorXd::Constant(1, lo);
    box.upper = Eigen::VectorXd::Constant(1, hi);
    box.validate();
    return box;
}

Eigen::VectorXd BoxSet::project(const Eigen::VectorXd& x) const {
    if (x.size() != lower.size()) invalid("project: dimension mismatch");
    return x.cwiseMax(lower).cwiseMin(upper);
}

bool BoxSet::contains(const Eigen::VectorXd& x, double tol) const {
    if (x.size() != lower.size()) return false;
    return (x.array() >= lower.array() - tol).all() && (x.array() <= upper.array() + tol).all();
}

Eigen::VectorXd BoxSet::sample(Rng& rng) const {
    Eigen::VectorXd x(lower.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = rng.uniform(lower[j], upper[j]);
    return x;
}

void BoxSet::validate() const {
    if (lower.size() == 0 || lower.size() != upper.size())
        throw Error(ErrorCode::Validation, "box: empty or mismatched bounds");
    if (!lower.allFinite() || !upper.allFinite())
        throw Error(ErrorCode::Validation, "box: bounds must be finite (compact set)");
    if ((lower.array() > upper.array()).any())
        throw Error(ErrorCode::Validation, "box: lower > upper");
}

// ---------------------------------------------------------------------------
// ScalarConvexFn
// ---------------------------------------------------------------------------

ScalarConvexFn ScalarConvexFn::quadratic(Eigen::VectorXd center, double weight) {
    if (weight < 0.0) invalid("quadratic: weight must be >= 0");
    ScalarConvexFn f;
    f.kind = Kind::Quadratic;
    f.center = std::move(center);
    f.weight = weight;
    return f;
}

ScalarConvexFn ScalarConvexFn::affine(Eigen::VectorXd slope, double offset) {
    ScalarConvexFn f;
    f.kind = Kind::Affine;
    f.slope = std::move(slope);
    f.offset = offset;
    return f;
}

ScalarConvexFn ScalarConvexFn::custom(ValueFn value, SubgradFn subgrad) {
    if (!value || !subgrad) invalid("custom: both callbacks are required");
    ScalarConvexFn f;
    f.kind = Kind::Custom;
    f.value_fn = std::move(value);
    f.subgrad_fn = std::move(subgrad);
    return f;
}

double ScalarConvexFn::value(const Eigen::VectorXd& x) const {
    switch (kind) {
        case Kind::Quadratic: {
            if (x.size() != center.size()) invalid("quadratic value: dimension mismatch");
            return 0.5 * weight * (x - center).squaredNorm();
        }
        case Kind::Affine: {
            if (x.size() != slope.size()) invalid("affine value: dimension mismatch");
            return slope.dot(x) + offset;
        }
        case Kind::Custom:
            return value_fn(x);
    }
    invalid("value: unknown kind");
}

Eigen::VectorXd ScalarConvexFn::subgradient(const Eigen::VectorXd& x) const {
    switch (kind) {
        case Kind::Quadratic: {
            if (x.size() != center.size()) invalid("quadratic subgradient: dimension mismatch");
            return weight * (x - center);
        }
        case Kind::Affine: {
            if (x.size() != slope.size()) invalid("affine subgradient: dimension mismatch");
            return slope;
        }
        case Kind::Custom: {
            Eigen::VectorXd s = subgrad_fn(x);
            if (s.size() != x.size()) invalid("custom subgradient: dimension mismatch");
            return s;
        }
    }
    invalid("subgradient: unknown kind");
}

int ScalarConvexFn::dim() const {
    switch (kind) {
        case Kind::Quadratic: return static_cast<int>(center.size());
        case Kind::Affine: return static_cast<int>(slope.size());
        case Kind::Custom: return -1;  // callbacks carry no intrinsic dimension
    }
    return -1;
}

void ScalarConvexFn::validate(int expected_dim) const {
    int d = dim();
    if (d >= 0 && d != expected_dim)
        throw Error(ErrorCode::Validation, "function dimension disagrees with agent dim");
}

// ---------------------------------------------------------------------------
// ConstraintMap / AgentProblem / CoupledProblem
// ---------------------------------------------------------------------------

Eigen::VectorXd ConstraintMap::value(const Eigen::VectorXd& x) const {
    Eigen::VectorXd g(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) g[static_cast<Eigen::Index>(r)] = rows[r].value(x);
    return g;
}

void AgentProblem::validate() const {
    feasible_set.validate();
    if (feasible_set.dim() != dim)
        throw Error(ErrorCode::Validation, "agent: box dimension disagrees with dim");
    objective.validate(dim);
    for (const auto& row : constraint.rows) row.validate(dim);
}

void CoupledProblem::validate() const {
    if (agents.empty()) throw Error(ErrorCode::Validation, "problem: no agents");
    for (const auto& agent : agents) {
        agent.validate();
        if (agent.constraint.dim() != constraint_dim)
            throw Error(ErrorCode::Validation, "problem: constraint dimension differs across agents");
    }
    if (constraint_dim <= 0)
        throw Error(ErrorCode::Validation, "problem: constraint_dim must be positive");
    if (slater_point) {
        if (static_cast<int>(slater_point->size()) != num_agents())
            throw Error(ErrorCode::Validation, "problem: interior point has wrong agent count");
        Eigen::VectorXd total = Eigen::VectorXd::Zero(constraint_dim);
        for (int i = 0; i < num_agents(); ++i) {
            const Eigen::VectorXd& xh = (*slater_point)[static_cast<std::size_t>(i)];
            if (!agents[static_cast<std::size_t>(i)].feasible_set.contains(xh, 1e-12))
                throw Error(ErrorCode::Validation, "problem: interior point leaves its box");
            total += agents[static_cast<std::size_t>(i)].constraint.value(xh);
        }
        if ((total.array() >= 0.0).any())
            throw Error(ErrorCode::Validation, "problem: interior point is not strictly feasible");
    }
}

std::pair<double, Eigen::VectorXd> eval_global(const CoupledProblem& problem,
                                               const std::vector<Eigen::VectorXd>& x) {
    if (static_cast<int>(x.size()) != problem.num_agents())
        invalid("eval_global: wrong number of agent points");
    double objective = 0.0;
    Eigen::VectorXd constraint = Eigen::VectorXd::Zero(problem.constraint_dim);
    for (int i = 0; i < problem.num_agents(); ++i) {
        const auto& agent = problem.agents[static_cast<std::size_t>(i)];
        const auto& xi = x[static_cast<std::size_t>(i)];
        if (xi.size() != agent.dim) invalid("eval_global: agent point has wrong dimension");
        objective += agent.objective.value(xi);
        constraint += agent.constraint.value(xi);
    }
    return {objective, constraint};
}

double slater_slack(const CoupledProblem& problem) {
    if (!problem.slater_point)
        throw Error(ErrorCode::NotAvailable, "slater_slack: no interior point stored");
    Eigen::VectorXd total = Eigen::VectorXd::Zero(problem.constraint_dim);
    for (int i = 0; i < problem.num_agents(); ++i)
        total += problem.agents[static_cast<std::size_t>(i)].constraint.value(
            (*problem.slater_point)[static_cast<std::size_t>(i)]);
    double slack = -total.maxCoeff();
    return slack > 0.0 ? slack : 0.0;
}

// ---------------------------------------------------------------------------
// problem_constants
// ---------------------------------------------------------------------------

namespace {

constexpr int kMaxExactVertexDim = 24;
constexpr int kSamplesPerAgent = 10000;

// Enumerates box vertices and applies fn to each.
template <typename Fn>
void for_each_vertex(const BoxSet& box, Fn&& fn) {
    const int d = box.dim();
    Eigen::VectorXd v(d);
    const std::uint64_t count = std::uint64_t{1} << d;
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        for (int j = 0; j < d; ++j)
            v[j] = (mask >> j) & 1 ? box.upper[j] : box.lower[j];
        fn(v);
    }
}

bool has_custom_part(const AgentProblem& agent) {
    if (agent.objective.kind == ScalarConvexFn::Kind::Custom) return true;
    for (const auto& row : agent.constraint.rows)
        if (row.kind == ScalarConvexFn::Kind::Custom) return true;
    return false;
}

// Exact range of a built-in scalar function over the box. Max of a convex
// function over a box sits at a vertex; the quadratic's min is the projected
// center, the affine's min is the opposite-sign vertex.
std::pair<double, double> exact_range(const ScalarConvexFn& f, const BoxSet& box) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for_each_vertex(box, [&](const Eigen::VectorXd& v) {
        double val = f.value(v);
        hi = std::max(hi, val);
        lo = std::min(lo, val);
    });
    if (f.kind == ScalarConvexFn::Kind::Quadratic)
        lo = f.value(box.project(f.center));
    return {lo, hi};
}

}  // namespace

ProblemConstants problem_constants(const CoupledProblem& problem) {
    ProblemConstants out;
    Rng sample_rng(0x5eedULL);  // fixed stream: constants never depend on run seeds
    for (const auto& agent : problem.agents) {
        const bool custom = has_custom_part(agent);
        const bool exact_ok = !custom && agent.dim <= kMaxExactVertexDim;
        double agent_f = 0.0;
        double f_min = std::numeric_limits<double>::infinity();
        double f_max = -std::numeric_limits<double>::infinity();

        if (exact_ok) {
            // ||g(x)||^2 is convex (sum of squares of affine rows plus squares
            // of nonnegative convex rows), so its max over the box is at a
            // vertex as well.
            for_each_vertex(agent.feasible_set, [&](const Eigen::VectorXd& v) {
                agent_f = std::max(agent_f, agent.constraint.value(v).norm());
            });
            auto [lo, hi] = exact_range(agent.objective, agent.feasible_set);
            f_min = lo;
            f_max = hi;
        } else {
            out.exact = false;
            for (int k = 0; k < kSamplesPerAgent; ++k) {
                Eigen::VectorXd x = agent.feasible_set.sample(sample_rng);
                double gn = agent.constraint.value(x).norm();
                double fv = agent.objective.value(x);
                if (!std::isfinite(gn) || !std::isfinite(fv))
                    throw Error(ErrorCode::Validation,
                                "problem_constants: custom function unbounded on its box");
                agent_f = std::max(agent_f, gn);
                f_min = std::min(f_min, fv);
                f_max = std::max(f_max, fv);
            }
            // include the vertices: extrema of any convex pieces live there
            if (agent.dim <= kMaxExactVertexDim) {
                for_each_vertex(agent.feasible_set, [&](const Eigen::VectorXd& v) {
                    double gn = agent.constraint.value(v).norm();
                    double fv = agent.objective.value(v);
                    if (!std::isfinite(gn) || !std::isfinite(fv))
                        throw Error(ErrorCode::Validation,
                                    "problem_constants: custom function unbounded on its box");
                    agent_f = std::max(agent_f, gn);
                    f_min = std::min(f_min, fv);
                    f_max = std::max(f_max, fv);
                });
            }
        }

        out.F = std::max(out.F, agent_f);
        out.G = std::max(out.G, f_max - f_min);
        out.R = std::max(out.R, agent.feasible_set.diameter());
    }
    return out;
}

}  // namespace bdpp
