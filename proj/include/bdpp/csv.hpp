#ifndef BDPP_CSV_HPP
#define BDPP_CSV_HPP

#include <string>
#include <vector>

#include "bdpp/engine.hpp"

namespace bdpp {

// Canonical run CSV: UTF-8, header row, '.' decimal separator, one row per
// recorded iteration:
//   t,objective_error,violation_1..violation_p,queue_sum_norm,drift,
//   drift_bound,lemma1_slack_min
// Doubles print as %.17g so identical runs produce identical bytes.

std::string format_double(double value);

std::string run_to_csv(const RunResult& run);
void write_run_csv(const RunResult& run, const std::string& path);

struct CsvRow {
    long t = 0;
    double objective_error = 0.0;
    std::vector<double> violation;
    double queue_sum_norm = 0.0;
    double drift = 0.0;
    double drift_bound = 0.0;
    double lemma1_slack_min = 0.0;
};

std::vector<CsvRow> read_run_csv(const std::string& path);

struct CsvCheck {
    bool ok = true;
    long rows = 0;
    std::string detail;
};

/// Independent pass over an emitted file: every row must satisfy
/// lemma1_slack_min >= -1e-9 and drift <= drift_bound + 1e-9. NaN entries
/// mark quantities the producing algorithm does not define and are skipped.
CsvCheck verify_run_csv(const std::string& path);

}  // namespace bdpp

#endif
