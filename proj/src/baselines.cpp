#include "bdpp/baselines.hpp"

#include <cmath>
#include <limits>

#include "bdpp/error.hpp"
#include "bdpp/local_solver.hpp"

namespace bdpp {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<Eigen::VectorXd> sample_start(const CoupledProblem& problem, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Eigen::VectorXd> x0;
    x0.reserve(static_cast<std::size_t>(problem.num_agents()));
    for (const auto& agent : problem.agents) x0.push_back(agent.feasible_set.sample(rng));
    return x0;
}

void fill_average_metrics(const CoupledProblem& problem, const std::vector<AgentState>& states,
                          IterationRecord& rec) {
    double obj = 0.0;
    Eigen::VectorXd viol = Eigen::VectorXd::Zero(problem.constraint_dim);
    for (int i = 0; i < problem.num_agents(); ++i) {
        const auto& agent = problem.agents[static_cast<std::size_t>(i)];
        const auto& s = states[static_cast<std::size_t>(i)];
        obj += agent.objective.value(s.avg_x);
        viol += agent.constraint.value(s.avg_x);
    }
    rec.avg_objective = obj;
    rec.objective_error = obj;
    rec.violation = std::move(viol);
}

}  // namespace

// ---------------------------------------------------------------------------
// Centralized DPP
// ---------------------------------------------------------------------------

DppState dpp_step(const CoupledProblem& problem, const DppState& state, double v) {
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidInput, "dpp_step: v must be > 0");
    if (state.queue.size() != problem.constraint_dim)
        throw Error(ErrorCode::InvalidInput, "dpp_step: queue dimension mismatch");

    DppState next;
    next.v_param = v;
    next.x.resize(static_cast<std::size_t>(problem.num_agents()));
    Eigen::VectorXd g_total = Eigen::VectorXd::Zero(problem.constraint_dim);
    for (int i = 0; i < problem.num_agents(); ++i) {
        const auto& agent = problem.agents[static_cast<std::size_t>(i)];
        Eigen::VectorXd xi = argmin_box_penalized(agent, v, state.queue);
        g_total += agent.constraint.value(xi);
        next.x[static_cast<std::size_t>(i)] = std::move(xi);
    }
    next.queue = (state.queue + g_total).cwiseMax(0.0);
    return next;
}

DppEngine::DppEngine(const CoupledProblem& problem, double v) : problem_(&problem), v_(v) {
    problem.validate();
    if (!(v_ > 0.0)) throw Error(ErrorCode::InvalidInput, "dpp engine: v must be > 0");
    reset(std::uint64_t{0});
}

void DppEngine::reset(std::uint64_t seed) { reset(sample_start(*problem_, seed)); }

void DppEngine::reset(const std::vector<Eigen::VectorXd>& x0) {
    if (static_cast<int>(x0.size()) != problem_->num_agents())
        throw Error(ErrorCode::InvalidInput, "dpp reset: wrong number of start points");
    states_.clear();
    for (int i = 0; i < problem_->num_agents(); ++i) {
        AgentState s;
        s.x = x0[static_cast<std::size_t>(i)];
        s.queue = Eigen::VectorXd::Zero(0);  // the global queue lives on the engine
        s.avg_x = s.x;
        s.iter_count = 0;
        states_.push_back(std::move(s));
    }
    queue_ = Eigen::VectorXd::Zero(problem_->constraint_dim);
    cum_g_ = Eigen::VectorXd::Zero(problem_->constraint_dim);
    t_ = 0;
}

IterationRecord DppEngine::step() {
    DppState cur;
    cur.queue = queue_;
    cur.v_param = v_;
    DppState next = dpp_step(*problem_, cur, v_);

    const double before = 0.5 * queue_.squaredNorm();
    Eigen::VectorXd g_total = Eigen::VectorXd::Zero(problem_->constraint_dim);
    for (int i = 0; i < problem_->num_agents(); ++i) {
        auto& s = states_[static_cast<std::size_t>(i)];
        s.x = next.x[static_cast<std::size_t>(i)];
        s.avg_x += (s.x - s.avg_x) / static_cast<double>(t_ + 1);
        s.iter_count = t_ + 1;
        g_total += problem_->agents[static_cast<std::size_t>(i)].constraint.value(s.x);
    }
    queue_ = next.queue;
    cum_g_ += g_total;

    IterationRecord rec;
    rec.t = t_ + 1;
    rec.queue_sum_norm = queue_.norm();
    rec.drift = 0.5 * queue_.squaredNorm() - before;
    rec.drift_bound = kNaN;  // no per-step certificate for this baseline
    rec.lemma1_slack = queue_ - cum_g_;  // telescoped queue identity, no buffer term
    rec.lemma1_slack_min = rec.lemma1_slack.minCoeff();
    fill_average_metrics(*problem_, states_, rec);

    ++t_;
    return rec;
}

// ---------------------------------------------------------------------------
// Distributed dual subgradient
// ---------------------------------------------------------------------------

DualSubgradState dual_subgrad_step(const CoupledProblem& problem, const GraphSchedule& schedule,
                                   const DualSubgradState& state, long t,
                                   const std::function<double(long)>& step_fn) {
    const double alpha = step_fn(t);
    if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidInput, "dual_subgrad_step: step must be > 0");
    const int n = problem.num_agents();
    const Round& round = schedule.round_at(t);
    if (round.mixing.rows() != n)
        throw Error(ErrorCode::InvalidInput, "dual_subgrad_step: mixing matrix has wrong shape");

    DualSubgradState next;
    next.x.resize(static_cast<std::size_t>(n));
    next.lambda.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd lam_hat = Eigen::VectorXd::Zero(problem.constraint_dim);
        for (int j = 0; j < n; ++j)
            lam_hat += round.mixing(i, j) * state.lambda[static_cast<std::size_t>(j)];
        const auto& agent = problem.agents[static_cast<std::size_t>(i)];
        Eigen::VectorXd xi = argmin_box_penalized(agent, 1.0, lam_hat);
        next.lambda[static_cast<std::size_t>(i)] =
            (lam_hat + alpha * agent.constraint.value(xi)).cwiseMax(0.0);
        next.x[static_cast<std::size_t>(i)] = std::move(xi);
    }
    return next;
}

DualSubgradEngine::DualSubgradEngine(const CoupledProblem& problem, const GraphSchedule& schedule,
                                     std::function<double(long)> step_fn)
    : problem_(&problem), schedule_(&schedule), step_fn_(std::move(step_fn)) {
    problem.validate();
    if (schedule.n_agents != problem.num_agents())
        throw Error(ErrorCode::InvalidInput, "dual_subgrad engine: schedule/problem size mismatch");
    if (!step_fn_) throw Error(ErrorCode::InvalidInput, "dual_subgrad engine: missing step function");
    reset(std::uint64_t{0});
}

DualSubgradEngine::DualSubgradEngine(const CoupledProblem& problem, const GraphSchedule& schedule,
                                     double a0)
    : DualSubgradEngine(problem, schedule,
                        [a0](long t) { return a0 / static_cast<double>(t + 1); }) {
    if (!(a0 > 0.0)) throw Error(ErrorCode::InvalidInput, "dual_subgrad engine: a0 must be > 0");
}

void DualSubgradEngine::reset(std::uint64_t seed) { reset(sample_start(*problem_, seed)); }

void DualSubgradEngine::reset(const std::vector<Eigen::VectorXd>& x0) {
    if (static_cast<int>(x0.size()) != problem_->num_agents())
        throw Error(ErrorCode::InvalidInput, "dual_subgrad reset: wrong number of start points");
    states_.clear();
    for (int i = 0; i < problem_->num_agents(); ++i) {
        AgentState s;
        s.x = x0[static_cast<std::size_t>(i)];
        s.queue = Eigen::VectorXd::Zero(problem_->constraint_dim);
        s.avg_x = s.x;
        s.iter_count = 0;
        states_.push_back(std::move(s));
    }
    t_ = 0;
}

IterationRecord DualSubgradEngine::step() {
    DualSubgradState cur;
    cur.x.reserve(states_.size());
    cur.lambda.reserve(states_.size());
    for (const auto& s : states_) {
        cur.x.push_back(s.x);
        cur.lambda.push_back(s.queue);
    }

    Eigen::VectorXd lam_bar_before = Eigen::VectorXd::Zero(problem_->constraint_dim);
    for (const auto& l : cur.lambda) lam_bar_before += l;

    DualSubgradState next = dual_subgrad_step(*problem_, *schedule_, cur, t_, step_fn_);

    Eigen::VectorXd lam_bar = Eigen::VectorXd::Zero(problem_->constraint_dim);
    for (int i = 0; i < problem_->num_agents(); ++i) {
        auto& s = states_[static_cast<std::size_t>(i)];
        s.x = next.x[static_cast<std::size_t>(i)];
        s.queue = next.lambda[static_cast<std::size_t>(i)];
        s.avg_x += (s.x - s.avg_x) / static_cast<double>(t_ + 1);
        s.iter_count = t_ + 1;
        lam_bar += s.queue;
    }

    IterationRecord rec;
    rec.t = t_ + 1;
    rec.queue_sum_norm = lam_bar.norm();
    rec.drift = 0.5 * lam_bar.squaredNorm() - 0.5 * lam_bar_before.squaredNorm();
    rec.drift_bound = kNaN;
    rec.lemma1_slack = Eigen::VectorXd::Constant(problem_->constraint_dim, kNaN);
    rec.lemma1_slack_min = kNaN;
    fill_average_metrics(*problem_, states_, rec);

    ++t_;
    return rec;
}

// ---------------------------------------------------------------------------

RunResult run_dpp(const CoupledProblem& problem, double v, const RunConfig& config) {
    double v_eff = v > 0.0 ? v : std::sqrt(static_cast<double>(config.horizon));
    DppEngine engine(problem, v_eff);
    return run_engine(engine, config);
}

RunResult run_dual_subgrad(const CoupledProblem& problem, const GraphSchedule& schedule,
                           double a0, const RunConfig& config) {
    DualSubgradEngine engine(problem, schedule, a0);
    return run_engine(engine, config);
}

}  // namespace bdpp
