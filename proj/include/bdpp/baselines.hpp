#ifndef BDPP_BASELINES_HPP
#define BDPP_BASELINES_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "bdpp/engine.hpp"
#include "bdpp/problem.hpp"
#include "bdpp/schedule.hpp"

namespace bdpp {

/// Centralized queue-based baseline with a single global virtual queue:
///   x_{t+1}  = argmin over X of V f(x) + <mu_t, g(x)>
///   mu_{t+1} = max{mu_t + g(x_{t+1}), 0}
/// The argmin separates per agent because f and g are additive over a
/// product of boxes.
struct DppState {
    std::vector<Eigen::VectorXd> x;  // stacked per agent
    Eigen::VectorXd queue;           // mu_t, componentwise >= 0
    double v_param = 1.0;
};

/// One centralized step; returns the new state. Throws on solver failure.
DppState dpp_step(const CoupledProblem& problem, const DppState& state, double v);

class DppEngine : public Engine {
public:
    DppEngine(const CoupledProblem& problem, double v);
    DppEngine(CoupledProblem&&, double) = delete;  // keeps a reference

    const char* algorithm() const override { return "dpp"; }
    const CoupledProblem& problem() const override { return *problem_; }
    void reset(std::uint64_t seed) override;
    void reset(const std::vector<Eigen::VectorXd>& x0) override;
    IterationRecord step() override;
    long time() const override { return t_; }
    const std::vector<AgentState>& states() const override { return states_; }
    bool solver_warning() const override { return false; }

    double v() const { return v_; }

private:
    const CoupledProblem* problem_;
    double v_ = 1.0;
    long t_ = 0;
    std::vector<AgentState> states_;  // per-agent x/avg_x; queue stored once below
    Eigen::VectorXd queue_;
    Eigen::VectorXd cum_g_;
};

/// Distributed dual subgradient baseline: per-agent multipliers mixed over
/// the network, a penalized local argmin with no proximal term, then
/// projected dual ascent with a diminishing step. Structure matches the
/// usual consensus-based dual method; it is a baseline, not a faithful
/// replication of any specific variant.
struct DualSubgradState {
    std::vector<Eigen::VectorXd> x;
    std::vector<Eigen::VectorXd> lambda;  // componentwise >= 0
};

/// One step: lambda_hat_i = sum_j W[i][j] lambda_j;
/// x_{i,t+1} = argmin over X_i of f_i + <lambda_hat_i, g_i>;
/// lambda_{i,t+1} = max{lambda_hat_i + step_fn(t) g_i(x_{i,t+1}), 0}.
DualSubgradState dual_subgrad_step(const CoupledProblem& problem, const GraphSchedule& schedule,
                                   const DualSubgradState& state, long t,
                                   const std::function<double(long)>& step_fn);

class DualSubgradEngine : public Engine {
public:
    DualSubgradEngine(const CoupledProblem& problem, const GraphSchedule& schedule,
                      std::function<double(long)> step_fn);
    /// Harmonic step a0 / (t + 1).
    DualSubgradEngine(const CoupledProblem& problem, const GraphSchedule& schedule, double a0);
    DualSubgradEngine(CoupledProblem&&, const GraphSchedule&, double) = delete;
    DualSubgradEngine(const CoupledProblem&, GraphSchedule&&, double) = delete;

    const char* algorithm() const override { return "dual_subgrad"; }
    const CoupledProblem& problem() const override { return *problem_; }
    void reset(std::uint64_t seed) override;
    void reset(const std::vector<Eigen::VectorXd>& x0) override;
    IterationRecord step() override;
    long time() const override { return t_; }
    const std::vector<AgentState>& states() const override { return states_; }
    bool solver_warning() const override { return false; }

private:
    const CoupledProblem* problem_;
    const GraphSchedule* schedule_;
    std::function<double(long)> step_fn_;
    long t_ = 0;
    std::vector<AgentState> states_;  // queue field holds lambda_i
};

RunResult run_dpp(const CoupledProblem& problem, double v, const RunConfig& config);
RunResult run_dual_subgrad(const CoupledProblem& problem, const GraphSchedule& schedule,
                           double a0, const RunConfig& config);

}  // namespace bdpp

#endif
