#ifndef BDPP_ENGINE_HPP
#define BDPP_ENGINE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bdpp/problem.hpp"
#include "bdpp/schedule.hpp"

namespace bdpp {

/// Time-varying scalars of the queueing algorithm, indexed from t = 1.
/// The step from time t to t+1 evaluates all three at t+1.
struct ParamSchedule {
    std::function<double(long)> v_fn;      // V_t > 0
    std::function<double(long)> eta_fn;    // eta_t > 0
    std::function<double(long)> gamma_fn;  // gamma_t >= 0
    double buffer_c = 0.0;

    /// Default schedule: V_t = sqrt(t), eta_t = t, gamma_t = c / sqrt(t).
    static ParamSchedule sqrt_schedule(double c);
    /// Fixed values for all t (gamma may be zero).
    static ParamSchedule constants(double v, double eta, double gamma);
};

/// Per-agent state at time t.
struct AgentState {
    Eigen::VectorXd x;       // x_{i,t}
    Eigen::VectorXd queue;   // mu_{i,t} (virtual queue, >= gamma_t floor for t >= 1)
    Eigen::VectorXd avg_x;   // (1/t) sum_{k=1..t} x_{i,k}; equals x_{i,0} at t = 0
    long iter_count = 0;
};

/// Diagnostics describing the state at time t (produced by the step from
/// t-1 to t). Quantities a given algorithm does not define are NaN.
struct IterationRecord {
    long t = 0;
    double objective_error = 0.0;   // sum_i f_i(avg_x_i) - f_star
    double avg_objective = 0.0;     // sum_i f_i(avg_x_i)
    Eigen::VectorXd violation;      // sum_i g_i(avg_x_i)
    double queue_sum_norm = 0.0;    // || sum_i mu_{i,t} ||
    double drift = 0.0;             // sum_i 0.5 (||mu_{i,t}||^2 - ||mu_{i,t-1}||^2)
    double drift_bound = 0.0;       // per-step upper bound on the drift
    Eigen::VectorXd lemma1_slack;   // sum_i mu_{i,t} - cum. violation - N * cum. buffer
    double lemma1_slack_min = 0.0;

    double max_violation() const { return violation.size() ? violation.maxCoeff() : 0.0; }
};

struct RunConfig {
    long horizon = 1;
    std::uint64_t seed = 0;
    long record_stride = 0;  // 0: every iteration up to 1000, then every 10th
    double f_star = 0.0;     // reference optimum subtracted into objective_error
    std::optional<std::vector<Eigen::VectorXd>> x0;  // overrides the seeded draw

    bool record_at(long t) const {
        if (t == horizon) return true;
        if (record_stride > 0) return t % record_stride == 0;
        return t <= 1000 || t % 10 == 0;
    }
};

struct RunResult {
    std::string algorithm;
    long horizon = 0;
    double f_star = 0.0;
    int constraint_dim = 0;
    std::vector<IterationRecord> records;
    std::vector<AgentState> final_states;

    // Tracked at every iteration, not just recorded ones.
    long first_feasible_t = -1;  // min t with violation <= 0 componentwise
    long last_infeasible_t = 0;  // max t with a positive violation component
    double min_lemma1_slack = std::numeric_limits<double>::infinity();
    double max_drift_excess = -std::numeric_limits<double>::infinity();  // max(drift - bound)
    bool solver_warning = false;
};

/// Common per-iteration surface shared by the algorithms so sweeps and
/// comparisons can drive any of them through one loop.
class Engine {
public:
    virtual ~Engine() = default;
    virtual const char* algorithm() const = 0;
    virtual const CoupledProblem& problem() const = 0;
    /// Resets to time 0 with x_{i,0} drawn uniformly from the boxes.
    virtual void reset(std::uint64_t seed) = 0;
    virtual void reset(const std::vector<Eigen::VectorXd>& x0) = 0;
    /// Advances one iteration and reports the new state's diagnostics.
    virtual IterationRecord step() = 0;
    virtual long time() const = 0;
    virtual const std::vector<AgentState>& states() const = 0;
    virtual bool solver_warning() const = 0;
};

// ============================================================================
// Buffered drift-plus-penalty engine. One iteration, from time t:
//   1. queue mixing     mu_hat_i = sum_j W_t[i][j] mu_j
//   2. primal update    x_{i,t+1} = argmin over X_i of
//                         V_{t+1} f_i(x) + <mu_hat_i, g_i(x)> + eta_{t+1}||x - x_{i,t}||^2
//   3. queue update     mu_{i,t+1} = max{mu_hat_i + g_i(x_{i,t+1}), 0} + gamma_{t+1} 1
// Updates are pure functions of the previous global state; cross-agent
// reductions run in fixed agent order so results do not depend on execution
// interleaving.
// ============================================================================
class BdppEngine : public Engine {
public:
    BdppEngine(const CoupledProblem& problem, const GraphSchedule& schedule,
               ParamSchedule params);
    // the engine keeps references; temporaries would dangle
    BdppEngine(CoupledProblem&&, const GraphSchedule&, ParamSchedule) = delete;
    BdppEngine(const CoupledProblem&, GraphSchedule&&, ParamSchedule) = delete;

    const char* algorithm() const override { return "bdpp"; }
    const CoupledProblem& problem() const override { return *problem_; }
    void reset(std::uint64_t seed) override;
    void reset(const std::vector<Eigen::VectorXd>& x0) override;
    IterationRecord step() override;
    long time() const override { return t_; }
    const std::vector<AgentState>& states() const override { return states_; }
    bool solver_warning() const override { return solver_warning_; }

    void set_f_star(double f_star) { f_star_ = f_star; }
    double f_const() const { return f_const_; }

private:
    const CoupledProblem* problem_;
    const GraphSchedule* schedule_;
    ParamSchedule params_;
    double f_const_ = 0.0;  // F, used by the per-step drift bound
    double f_star_ = 0.0;
    long t_ = 0;
    std::vector<AgentState> states_;
    Eigen::VectorXd cum_g_;     // sum_{k=1..t} sum_i g_i(x_{i,k})
    double cum_gamma_ = 0.0;    // sum_{k=1..t} gamma_k
    bool solver_warning_ = false;
};

/// Queue mixing: mu_hat_i = sum_j W[i][j] mu_j, fixed j order.
std::vector<Eigen::VectorXd> mix_queues(const std::vector<AgentState>& states,
                                        const Round& round);

/// Buffered queue update: max{mu_hat + g_val, 0} + gamma * 1.
Eigen::VectorXd queue_update(const Eigen::VectorXd& mu_hat, const Eigen::VectorXd& g_val,
                             double gamma);

/// Drives any engine for config.horizon iterations, recording diagnostics at
/// the configured stride and tracking the every-iteration invariants.
RunResult run_engine(Engine& engine, const RunConfig& config);

/// Convenience wrapper building a BdppEngine and running it.
RunResult run_bdpp(const CoupledProblem& problem, const GraphSchedule& schedule,
                   const ParamSchedule& params, const RunConfig& config);

}  // namespace bdpp

#endif
