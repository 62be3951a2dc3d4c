#ifndef BDPP_JSON_IO_HPP
#define BDPP_JSON_IO_HPP

#include <string>

#include "bdpp/bounds.hpp"
#include "bdpp/engine.hpp"
#include "bdpp/problem.hpp"
#include "bdpp/schedule.hpp"

namespace bdpp {

// JSON wire formats. Problems:
//   {"agents": [{"dim": d,
//                "objective": {"kind": "quadratic", "center": [...], "weight": w}
//                           | {"kind": "affine", "slope": [...], "offset": o},
//                "constraint": [ <row objects, same shape> ... ],
//                "box": {"lower": [...], "upper": [...]}}, ...],
//    "slater_point": [[...], ...]}            // optional
// Schedules (agent indices 0-based on the wire):
//   {"n_agents": N, "window": B, "min_weight": a,
//    "rounds": [{"edges": [[i, j], ...], "mixing": [[...], ...]}, ...]}
// Custom function kinds carry callbacks and cannot cross this boundary.

CoupledProblem problem_from_json(const std::string& text);
std::string problem_to_json(const CoupledProblem& problem);

GraphSchedule schedule_from_json(const std::string& text);
std::string schedule_to_json(const GraphSchedule& schedule);

std::string bounds_to_json(const BoundsReport& report);

/// {"algorithm", "horizon", "final_objective_error", "final_violation",
///  "first_feasible_t", ...}
std::string run_summary_json(const RunResult& run);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace bdpp

#endif
