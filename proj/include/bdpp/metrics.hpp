#ifndef BDPP_METRICS_HPP
#define BDPP_METRICS_HPP

#include <vector>

#include "bdpp/engine.hpp"
#include "bdpp/oracle.hpp"

namespace bdpp {

/// Convergence series of one run, measured against the reference optimum.
struct RunMetrics {
    std::vector<long> t;
    std::vector<double> objective_error;      // sum f_i(avg) - f_star (signed)
    std::vector<double> abs_objective_error;  // |objective_error|
    std::vector<double> max_violation;        // max component of sum g_i(avg)
    std::vector<double> scaled_error;         // sqrt(t) * abs error
    std::vector<double> scaled_violation;     // sqrt(t) * max(violation, 0)
    long first_feasible_t = -1;
};

/// Recomputes errors of the recorded iterations against the oracle optimum
/// and forms the sqrt(t)-scaled series. first_feasible_t comes from the
/// run's every-iteration tracking, not just the recorded rows.
RunMetrics metrics(const RunResult& run, const OracleResult& oracle);

}  // namespace bdpp

#endif
