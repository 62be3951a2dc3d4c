#include "bdpp/metrics.hpp"

#include <cmath>

namespace bdpp {

RunMetrics metrics(const RunResult& run, const OracleResult& oracle) {
    RunMetrics m;
    m.t.reserve(run.records.size());
    for (const auto& rec : run.records) {
        double err = rec.avg_objective - oracle.f_star;
        double viol = rec.max_violation();
        double st = std::sqrt(static_cast<double>(rec.t));
        m.t.push_back(rec.t);
        m.objective_error.push_back(err);
        m.abs_objective_error.push_back(std::abs(err));
        m.max_violation.push_back(viol);
        m.scaled_error.push_back(st * std::abs(err));
        m.scaled_violation.push_back(st * std::max(viol, 0.0));
    }
    m.first_feasible_t = run.first_feasible_t;
    return m;
}

}  // namespace bdpp
