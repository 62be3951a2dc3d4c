#include "bdpp/engine.hpp"

#include <cmath>

#include "bdpp/error.hpp"
#include "bdpp/local_solver.hpp"

namespace bdpp {

ParamSchedule ParamSchedule::sqrt_schedule(double c) {
    if (c < 0.0) throw Error(ErrorCode::InvalidInput, "param schedule: buffer c must be >= 0");
    ParamSchedule p;
    p.v_fn = [](long t) { return std::sqrt(static_cast<double>(t)); };
    p.eta_fn = [](long t) { return static_cast<double>(t); };
    p.gamma_fn = [c](long t) { return c / std::sqrt(static_cast<double>(t)); };
    p.buffer_c = c;
    return p;
}

ParamSchedule ParamSchedule::constants(double v, double eta, double gamma) {
    if (!(v > 0.0) || !(eta > 0.0) || gamma < 0.0)
        throw Error(ErrorCode::InvalidInput, "param schedule: need v > 0, eta > 0, gamma >= 0");
    ParamSchedule p;
    p.v_fn = [v](long) { return v; };
    p.eta_fn = [eta](long) { return eta; };
    p.gamma_fn = [gamma](long) { return gamma; };
    p.buffer_c = gamma;
    return p;
}

std::vector<Eigen::VectorXd> mix_queues(const std::vector<AgentState>& states,
                                        const Round& round) {
    const int n = static_cast<int>(states.size());
    if (round.mixing.rows() != n || round.mixing.cols() != n)
        throw Error(ErrorCode::InvalidInput, "mix_queues: mixing matrix has wrong shape");
    const Eigen::Index p = states.empty() ? 0 : states[0].queue.size();
    std::vector<Eigen::VectorXd> mixed(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(p);
        for (int j = 0; j < n; ++j) {
            if (states[static_cast<std::size_t>(j)].queue.size() != p)
                throw Error(ErrorCode::InvalidInput, "mix_queues: queue dimension mismatch");
            acc += round.mixing(i, j) * states[static_cast<std::size_t>(j)].queue;
        }
        mixed[static_cast<std::size_t>(i)] = std::move(acc);
    }
    return mixed;
}

Eigen::VectorXd queue_update(const Eigen::VectorXd& mu_hat, const Eigen::VectorXd& g_val,
                             double gamma) {
    if (mu_hat.size() != g_val.size())
        throw Error(ErrorCode::InvalidInput, "queue_update: dimension mismatch");
    return (mu_hat + g_val).cwiseMax(0.0).array() + gamma;
}

// ---------------------------------------------------------------------------
// BdppEngine
// ---------------------------------------------------------------------------

BdppEngine::BdppEngine(const CoupledProblem& problem, const GraphSchedule& schedule,
                       ParamSchedule params)
    : problem_(&problem), schedule_(&schedule), params_(std::move(params)) {
    problem.validate();
    if (schedule.n_agents != problem.num_agents())
        throw Error(ErrorCode::InvalidInput, "engine: schedule sized for a different agent count");
    if (!params_.v_fn || !params_.eta_fn || !params_.gamma_fn)
        throw Error(ErrorCode::InvalidInput, "engine: incomplete parameter schedule");
    f_const_ = problem_constants(problem).F;
    reset(std::uint64_t{0});
}

void BdppEngine::reset(std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Eigen::VectorXd> x0;
    x0.reserve(static_cast<std::size_t>(problem_->num_agents()));
    for (const auto& agent : problem_->agents) x0.push_back(agent.feasible_set.sample(rng));
    reset(x0);
}

void BdppEngine::reset(const std::vector<Eigen::VectorXd>& x0) {
    if (static_cast<int>(x0.size()) != problem_->num_agents())
        throw Error(ErrorCode::InvalidInput, "engine reset: wrong number of start points");
    const int p = problem_->constraint_dim;
    states_.clear();
    for (int i = 0; i < problem_->num_agents(); ++i) {
        const auto& agent = problem_->agents[static_cast<std::size_t>(i)];
        const auto& xi = x0[static_cast<std::size_t>(i)];
        if (!agent.feasible_set.contains(xi, 1e-12))
            throw Error(ErrorCode::InvalidInput, "engine reset: start point outside its box");
        AgentState s;
        s.x = xi;
        s.queue = Eigen::VectorXd::Zero(p);
        s.avg_x = xi;
        s.iter_count = 0;
        states_.push_back(std::move(s));
    }
    t_ = 0;
    cum_g_ = Eigen::VectorXd::Zero(p);
    cum_gamma_ = 0.0;
    solver_warning_ = false;
}

IterationRecord BdppEngine::step() {
    const int n = problem_->num_agents();
    const int p = problem_->constraint_dim;
    const Round& round = schedule_->round_at(t_);
    const double v = params_.v_fn(t_ + 1);
    const double eta = params_.eta_fn(t_ + 1);
    const double gamma = params_.gamma_fn(t_ + 1);
    if (!(v > 0.0) || !(eta > 0.0) || gamma < 0.0)
        throw Error(ErrorCode::InvalidInput, "engine: parameter schedule left its domain");

    // Phase 1: queue mixing (uses only time-t state).
    std::vector<Eigen::VectorXd> mu_hat = mix_queues(states_, round);

    Eigen::VectorXd mu_bar = Eigen::VectorXd::Zero(p);
    double lyapunov_before = 0.0;
    for (const auto& s : states_) {
        mu_bar += s.queue;
        lyapunov_before += 0.5 * s.queue.squaredNorm();
    }

    // Phase 2: primal updates.
    std::vector<Eigen::VectorXd> x_next(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        SubproblemSpec spec;
        spec.agent = &problem_->agents[static_cast<std::size_t>(i)];
        spec.v = v;
        spec.queue = mu_hat[static_cast<std::size_t>(i)];
        spec.eta = eta;
        spec.anchor = states_[static_cast<std::size_t>(i)].x;
        try {
            x_next[static_cast<std::size_t>(i)] = solve_subproblem(spec, &solver_warning_);
        } catch (const Error& e) {
            // agents are 1-based in diagnostics, 0-based on the wire
            throw Error(e.code(), "agent " + std::to_string(i + 1) + ", t=" +
                                      std::to_string(t_) + ": " + e.what());
        }
    }

    // Phase 3: queue updates and diagnostics.
    Eigen::VectorXd g_sum = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd mu_bar_next = Eigen::VectorXd::Zero(p);
    double lyapunov_after = 0.0;
    double minimized_sum = 0.0;
    double consensus_gap = 0.0;  // sum_i ||mu_bar - mu_hat_i||
    for (int i = 0; i < n; ++i) {
        auto& s = states_[static_cast<std::size_t>(i)];
        const auto& agent = problem_->agents[static_cast<std::size_t>(i)];
        const Eigen::VectorXd& xi = x_next[static_cast<std::size_t>(i)];
        const Eigen::VectorXd gi = agent.constraint.value(xi);
        const Eigen::VectorXd& mh = mu_hat[static_cast<std::size_t>(i)];

        minimized_sum += v * agent.objective.value(xi) + mh.dot(gi) +
                         eta * (xi - s.x).squaredNorm();
        consensus_gap += (mu_bar - mh).norm();

        s.queue = queue_update(mh, gi, gamma);
        mu_bar_next += s.queue;
        lyapunov_after += 0.5 * s.queue.squaredNorm();
        g_sum += gi;

        s.x = xi;
        s.avg_x += (xi - s.avg_x) / static_cast<double>(t_ + 1);
        s.iter_count = t_ + 1;
    }
    cum_g_ += g_sum;
    cum_gamma_ += gamma;

    const double sqrt_p = std::sqrt(static_cast<double>(p));
    const double F = f_const_;
    const double nd = static_cast<double>(n);

    IterationRecord rec;
    rec.t = t_ + 1;
    // Drift of the local-queue Lyapunov sum_i 0.5||mu_i||^2. The clamp in the
    // queue update and the 2-norm contraction of doubly stochastic mixing
    // keep this below the bound for every N and gamma; the norm of the
    // summed queue does not satisfy the same constants once N > 8.
    rec.drift = lyapunov_after - lyapunov_before;
    rec.drift_bound = (F + 2.0 * sqrt_p * gamma) * consensus_gap + minimized_sum +
                      2.0 * nd * F * F + 4.0 * nd * F * p * gamma +
                      4.0 * nd * p * gamma * gamma + nd * gamma * mu_bar.sum();
    rec.queue_sum_norm = mu_bar_next.norm();
    rec.lemma1_slack = mu_bar_next - cum_g_ -
                       Eigen::VectorXd::Constant(p, nd * cum_gamma_);
    rec.lemma1_slack_min = rec.lemma1_slack.minCoeff();

    double obj = 0.0;
    Eigen::VectorXd viol = Eigen::VectorXd::Zero(p);
    for (int i = 0; i < n; ++i) {
        const auto& agent = problem_->agents[static_cast<std::size_t>(i)];
        const auto& s = states_[static_cast<std::size_t>(i)];
        obj += agent.objective.value(s.avg_x);
        viol += agent.constraint.value(s.avg_x);
    }
    rec.avg_objective = obj;
    rec.objective_error = obj - f_star_;
    rec.violation = std::move(viol);

    ++t_;
    return rec;
}

// ---------------------------------------------------------------------------
// Run harness
// ---------------------------------------------------------------------------

RunResult run_engine(Engine& engine, const RunConfig& config) {
    if (config.horizon < 1)
        throw Error(ErrorCode::InvalidInput, "run: horizon must be >= 1");
    if (config.x0)
        engine.reset(*config.x0);
    else
        engine.reset(config.seed);

    RunResult result;
    result.algorithm = engine.algorithm();
    result.horizon = config.horizon;
    result.f_star = config.f_star;
    result.constraint_dim = engine.problem().constraint_dim;

    for (long t = 1; t <= config.horizon; ++t) {
        IterationRecord rec = engine.step();
        rec.objective_error = rec.avg_objective - config.f_star;

        const bool feasible = (rec.violation.array() <= 0.0).all();
        if (feasible && result.first_feasible_t < 0) result.first_feasible_t = t;
        if (!feasible) result.last_infeasible_t = t;
        if (std::isfinite(rec.lemma1_slack_min))
            result.min_lemma1_slack = std::min(result.min_lemma1_slack, rec.lemma1_slack_min);
        if (std::isfinite(rec.drift_bound))
            result.max_drift_excess = std::max(result.max_drift_excess, rec.drift - rec.drift_bound);

        if (config.record_at(t)) result.records.push_back(std::move(rec));
    }
    result.final_states = engine.states();
    result.solver_warning = engine.solver_warning();
    return result;
}

RunResult run_bdpp(const CoupledProblem& problem, const GraphSchedule& schedule,
                   const ParamSchedule& params, const RunConfig& config) {
    BdppEngine engine(problem, schedule, params);
    engine.set_f_star(config.f_star);
    return run_engine(engine, config);
}

}  // namespace bdpp
