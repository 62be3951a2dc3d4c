#include "bdpp.h"

#include <cmath>
#include <cstring>
#include <string>

#include "bdpp/baselines.hpp"
#include "bdpp/bounds.hpp"
#include "bdpp/csv.hpp"
#include "bdpp/engine.hpp"
#include "bdpp/error.hpp"
#include "bdpp/family.hpp"
#include "bdpp/json_io.hpp"
#include "bdpp/oracle.hpp"
#include "bdpp/problem.hpp"
#include "bdpp/schedule.hpp"

struct bdpp_problem {
    bdpp::CoupledProblem value;
};
struct bdpp_schedule {
    bdpp::GraphSchedule value;
};
struct bdpp_run {
    bdpp::RunResult value;
};
struct bdpp_oracle {
    bdpp::OracleResult value;
};

namespace {

thread_local std::string g_last_error;

bdpp_status to_status(bdpp::ErrorCode code) {
    using bdpp::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidInput: return BDPP_ERR_INVALID_ARGUMENT;
        case ErrorCode::NotAvailable: return BDPP_ERR_NOT_AVAILABLE;
        case ErrorCode::Unsupported: return BDPP_ERR_UNSUPPORTED;
        case ErrorCode::Validation: return BDPP_ERR_VALIDATION;
        case ErrorCode::Infeasible: return BDPP_ERR_INFEASIBLE;
        case ErrorCode::Parse: return BDPP_ERR_PARSE;
        case ErrorCode::Io: return BDPP_ERR_IO;
        case ErrorCode::Runtime: return BDPP_ERR_RUNTIME;
    }
    return BDPP_ERR_RUNTIME;
}

bdpp_status fail(bdpp_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

bdpp_status fail_null(const char* what) {
    return fail(BDPP_ERR_INVALID_ARGUMENT, std::string(what) + ": null argument");
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
bdpp_status guarded(Fn&& fn) {
    try {
        fn();
        return BDPP_OK;
    } catch (const bdpp::Error& e) {
        return fail(to_status(e.code()), e.what());
    } catch (const std::exception& e) {
        return fail(BDPP_ERR_RUNTIME, e.what());
    } catch (...) {
        return fail(BDPP_ERR_RUNTIME, "unknown failure");
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* bdpp_status_name(bdpp_status status) {
    switch (status) {
        case BDPP_OK: return "ok";
        case BDPP_ERR_INVALID_ARGUMENT: return "invalid-argument";
        case BDPP_ERR_NOT_AVAILABLE: return "not-available";
        case BDPP_ERR_UNSUPPORTED: return "unsupported";
        case BDPP_ERR_VALIDATION: return "validation";
        case BDPP_ERR_INFEASIBLE: return "infeasible";
        case BDPP_ERR_PARSE: return "parse";
        case BDPP_ERR_IO: return "io";
        case BDPP_ERR_RUNTIME: return "runtime";
    }
    return "unknown";
}

const char* bdpp_last_error(void) { return g_last_error.c_str(); }

void bdpp_string_free(char* s) { delete[] s; }

/* -------------------------------- problems ------------------------------ */

bdpp_status bdpp_problem_from_json(const char* json_text, bdpp_problem** out) {
    if (!json_text || !out) return fail_null("bdpp_problem_from_json");
    return guarded([&] { *out = new bdpp_problem{bdpp::problem_from_json(json_text)}; });
}

bdpp_status bdpp_problem_to_json(const bdpp_problem* problem, char** out_json) {
    if (!problem || !out_json) return fail_null("bdpp_problem_to_json");
    return guarded([&] { *out_json = dup_string(bdpp::problem_to_json(problem->value)); });
}

bdpp_status bdpp_problem_resource_family(int n_agents, uint64_t seed, bdpp_problem** out) {
    if (!out) return fail_null("bdpp_problem_resource_family");
    return guarded([&] { *out = new bdpp_problem{bdpp::make_resource_family(n_agents, seed)}; });
}

void bdpp_problem_free(bdpp_problem* problem) { delete problem; }

int bdpp_problem_num_agents(const bdpp_problem* problem) {
    return problem ? problem->value.num_agents() : -1;
}

int bdpp_problem_constraint_dim(const bdpp_problem* problem) {
    return problem ? problem->value.constraint_dim : -1;
}

bdpp_status bdpp_problem_constants(const bdpp_problem* problem, double* f_out, double* g_out,
                                   double* r_out, int* exact) {
    if (!problem || !f_out || !g_out || !r_out) return fail_null("bdpp_problem_constants");
    return guarded([&] {
        bdpp::ProblemConstants c = bdpp::problem_constants(problem->value);
        *f_out = c.F;
        *g_out = c.G;
        *r_out = c.R;
        if (exact) *exact = c.exact ? 1 : 0;
    });
}

bdpp_status bdpp_problem_slater_slack(const bdpp_problem* problem, double* eps_out) {
    if (!problem || !eps_out) return fail_null("bdpp_problem_slater_slack");
    return guarded([&] { *eps_out = bdpp::slater_slack(problem->value); });
}

/* ------------------------------- schedules ------------------------------ */

bdpp_status bdpp_schedule_ring(int n_agents, int window, double lazy_weight,
                               bdpp_schedule** out) {
    if (!out) return fail_null("bdpp_schedule_ring");
    return guarded([&] {
        *out = new bdpp_schedule{
            bdpp::make_ring_partition_schedule(n_agents, window, lazy_weight)};
    });
}

bdpp_status bdpp_schedule_from_json(const char* json_text, bdpp_schedule** out) {
    if (!json_text || !out) return fail_null("bdpp_schedule_from_json");
    return guarded([&] { *out = new bdpp_schedule{bdpp::schedule_from_json(json_text)}; });
}

bdpp_status bdpp_schedule_to_json(const bdpp_schedule* schedule, char** out_json) {
    if (!schedule || !out_json) return fail_null("bdpp_schedule_to_json");
    return guarded([&] { *out_json = dup_string(bdpp::schedule_to_json(schedule->value)); });
}

void bdpp_schedule_free(bdpp_schedule* schedule) { delete schedule; }

int bdpp_schedule_n_agents(const bdpp_schedule* schedule) {
    return schedule ? schedule->value.n_agents : -1;
}

int bdpp_schedule_window(const bdpp_schedule* schedule) {
    return schedule ? schedule->value.window : -1;
}

double bdpp_schedule_min_weight(const bdpp_schedule* schedule) {
    return schedule ? schedule->value.min_weight : -1.0;
}

int bdpp_schedule_check_connectivity(const bdpp_schedule* schedule, int window) {
    if (!schedule) return -1;
    bool ok = false;
    bdpp_status status =
        guarded([&] { ok = bdpp::verify_b_connectivity(schedule->value, window); });
    if (status != BDPP_OK) return -1;
    return ok ? 1 : 0;
}

bdpp_status bdpp_schedule_check_mixing(const bdpp_schedule* schedule, int* ok,
                                       double* min_positive_entry) {
    if (!schedule || !ok) return fail_null("bdpp_schedule_check_mixing");
    return guarded([&] {
        bdpp::MixingCheck check = bdpp::verify_mixing(schedule->value);
        *ok = check.ok ? 1 : 0;
        if (min_positive_entry) *min_positive_entry = check.min_positive_entry;
        if (!check.ok) g_last_error = check.detail;
    });
}

/* ---------------------------------- runs -------------------------------- */

void bdpp_run_options_init(bdpp_run_options* options) {
    if (!options) return;
    options->algorithm = BDPP_ALG_BDPP;
    options->horizon = 1;
    options->seed = 0;
    options->record_stride = 0;
    options->f_star = 0.0;
    options->buffer_c = 0.0;
    options->dpp_v = 0.0;
    options->dual_step_a0 = 1.0;
    options->x0 = nullptr;
    options->x0_len = 0;
}

bdpp_status bdpp_run_execute(const bdpp_problem* problem, const bdpp_schedule* schedule,
                             const bdpp_run_options* options, bdpp_run** out) {
    if (!problem || !options || !out) return fail_null("bdpp_run_execute");
    if (options->algorithm != BDPP_ALG_DPP && !schedule)
        return fail(BDPP_ERR_INVALID_ARGUMENT, "bdpp_run_execute: schedule required");
    return guarded([&] {
        bdpp::RunConfig config;
        config.horizon = options->horizon;
        config.seed = options->seed;
        config.record_stride = options->record_stride;
        config.f_star = options->f_star;
        if (options->x0) {
            std::vector<Eigen::VectorXd> x0;
            int64_t offset = 0;
            for (const auto& agent : problem->value.agents) {
                if (offset + agent.dim > options->x0_len)
                    throw bdpp::Error(bdpp::ErrorCode::InvalidInput,
                                      "bdpp_run_execute: x0 shorter than total dimension");
                Eigen::VectorXd xi(agent.dim);
                for (int j = 0; j < agent.dim; ++j) xi[j] = options->x0[offset + j];
                offset += agent.dim;
                x0.push_back(std::move(xi));
            }
            config.x0 = std::move(x0);
        }

        bdpp::RunResult result;
        switch (options->algorithm) {
            case BDPP_ALG_BDPP:
                result = bdpp::run_bdpp(problem->value, schedule->value,
                                        bdpp::ParamSchedule::sqrt_schedule(options->buffer_c),
                                        config);
                break;
            case BDPP_ALG_DPP:
                result = bdpp::run_dpp(problem->value, options->dpp_v, config);
                break;
            case BDPP_ALG_DUAL_SUBGRAD:
                result = bdpp::run_dual_subgrad(problem->value, schedule->value,
                                                options->dual_step_a0, config);
                break;
            default:
                throw bdpp::Error(bdpp::ErrorCode::InvalidInput,
                                  "bdpp_run_execute: unknown algorithm");
        }
        *out = new bdpp_run{std::move(result)};
    });
}

void bdpp_run_free(bdpp_run* run) { delete run; }

int64_t bdpp_run_num_records(const bdpp_run* run) {
    return run ? static_cast<int64_t>(run->value.records.size()) : -1;
}

bdpp_status bdpp_run_record(const bdpp_run* run, int64_t index, bdpp_record* out) {
    if (!run || !out) return fail_null("bdpp_run_record");
    if (index < 0 || index >= static_cast<int64_t>(run->value.records.size()))
        return fail(BDPP_ERR_INVALID_ARGUMENT, "bdpp_run_record: index out of range");
    const bdpp::IterationRecord& rec = run->value.records[static_cast<std::size_t>(index)];
    out->t = rec.t;
    out->objective_error = rec.objective_error;
    out->avg_objective = rec.avg_objective;
    out->max_violation = rec.max_violation();
    out->queue_sum_norm = rec.queue_sum_norm;
    out->drift = rec.drift;
    out->drift_bound = rec.drift_bound;
    out->lemma1_slack_min = rec.lemma1_slack_min;
    return BDPP_OK;
}

bdpp_status bdpp_run_record_violation(const bdpp_run* run, int64_t index, double* buf,
                                      int buf_len) {
    if (!run || !buf) return fail_null("bdpp_run_record_violation");
    if (index < 0 || index >= static_cast<int64_t>(run->value.records.size()))
        return fail(BDPP_ERR_INVALID_ARGUMENT, "bdpp_run_record_violation: index out of range");
    const Eigen::VectorXd& v = run->value.records[static_cast<std::size_t>(index)].violation;
    if (buf_len < v.size())
        return fail(BDPP_ERR_INVALID_ARGUMENT, "bdpp_run_record_violation: buffer too small");
    for (Eigen::Index r = 0; r < v.size(); ++r) buf[r] = v[r];
    return BDPP_OK;
}

int64_t bdpp_run_first_feasible_t(const bdpp_run* run) {
    return run ? run->value.first_feasible_t : -1;
}

int64_t bdpp_run_last_infeasible_t(const bdpp_run* run) {
    return run ? run->value.last_infeasible_t : -1;
}

double bdpp_run_min_lemma1_slack(const bdpp_run* run) {
    return run ? run->value.min_lemma1_slack : std::nan("");
}

double bdpp_run_max_drift_excess(const bdpp_run* run) {
    return run ? run->value.max_drift_excess : std::nan("");
}

bdpp_status bdpp_run_write_csv(const bdpp_run* run, const char* path) {
    if (!run || !path) return fail_null("bdpp_run_write_csv");
    return guarded([&] { bdpp::write_run_csv(run->value, path); });
}

bdpp_status bdpp_run_summary_json(const bdpp_run* run, char** out_json) {
    if (!run || !out_json) return fail_null("bdpp_run_summary_json");
    return guarded([&] { *out_json = dup_string(bdpp::run_summary_json(run->value)); });
}

bdpp_status bdpp_verify_csv(const char* path, int* ok, char** detail) {
    if (!path || !ok) return fail_null("bdpp_verify_csv");
    return guarded([&] {
        bdpp::CsvCheck check = bdpp::verify_run_csv(path);
        *ok = check.ok ? 1 : 0;
        if (detail) *detail = dup_string(check.detail);
    });
}

/* -------------------------------- analysis ------------------------------ */

bdpp_status bdpp_compute_bounds(double f_const, double g_const, double r_const, double eps,
                                int n_agents, int window, double a, int p, double buffer_c,
                                bdpp_bounds* out) {
    if (!out) return fail_null("bdpp_compute_bounds");
    return guarded([&] {
        bdpp::BoundsInput in;
        in.F = f_const;
        in.G = g_const;
        in.R = r_const;
        in.eps = eps;
        in.n_agents = n_agents;
        in.window = window;
        in.a = a;
        in.p = p;
        in.buffer_c = buffer_c;
        bdpp::BoundsReport report = bdpp::compute_bounds(in);
        *out = bdpp_bounds{f_const,
                           g_const,
                           r_const,
                           eps,
                           n_agents,
                           window,
                           a,
                           p,
                           buffer_c,
                           report.r,
                           report.beta,
                           report.delta,
                           report.sigma,
                           report.c1,
                           report.c2,
                           report.cf,
                           report.cg,
                           report.c0,
                           report.t1,
                           report.degenerate_log ? 1 : 0,
                           report.t1_finite ? 1 : 0,
                           report.vacuous ? 1 : 0};
    });
}

bdpp_status bdpp_bounds_json(const bdpp_bounds* bounds, char** out_json) {
    if (!bounds || !out_json) return fail_null("bdpp_bounds_json");
    return guarded([&] {
        bdpp::BoundsInput in;
        in.F = bounds->f_const;
        in.G = bounds->g_const;
        in.R = bounds->r_const;
        in.eps = bounds->eps;
        in.n_agents = bounds->n_agents;
        in.window = bounds->window;
        in.a = bounds->a;
        in.p = bounds->p;
        in.buffer_c = bounds->buffer_c;
        bdpp::BoundsReport report = bdpp::compute_bounds(in);
        *out_json = dup_string(bdpp::bounds_to_json(report));
    });
}

bdpp_status bdpp_oracle_solve(const bdpp_problem* problem, double tol, bdpp_oracle** out) {
    if (!problem || !out) return fail_null("bdpp_oracle_solve");
    return guarded([&] { *out = new bdpp_oracle{bdpp::kkt_oracle(problem->value, tol)}; });
}

void bdpp_oracle_free(bdpp_oracle* oracle) { delete oracle; }

double bdpp_oracle_objective(const bdpp_oracle* oracle) {
    return oracle ? oracle->value.f_star : std::nan("");
}

double bdpp_oracle_kkt_residual(const bdpp_oracle* oracle) {
    return oracle ? oracle->value.kkt_residual : std::nan("");
}

bdpp_status bdpp_oracle_solution(const bdpp_oracle* oracle, int agent, double* buf, int buf_len) {
    if (!oracle || !buf) return fail_null("bdpp_oracle_solution");
    if (agent < 0 || agent >= static_cast<int>(oracle->value.x_star.size()))
        return fail(BDPP_ERR_INVALID_ARGUMENT, "bdpp_oracle_solution: agent out of range");
    const Eigen::VectorXd& x = oracle->value.x_star[static_cast<std::size_t>(agent)];
    if (buf_len < x.size())
        return fail(BDPP_ERR_INVALID_ARGUMENT, "bdpp_oracle_solution: buffer too small");
    for (Eigen::Index j = 0; j < x.size(); ++j) buf[j] = x[j];
    return BDPP_OK;
}

bdpp_status bdpp_oracle_multiplier(const bdpp_oracle* oracle, double* buf, int buf_len) {
    if (!oracle || !buf) return fail_null("bdpp_oracle_multiplier");
    const Eigen::VectorXd& l = oracle->value.lambda_star;
    if (buf_len < l.size())
        return fail(BDPP_ERR_INVALID_ARGUMENT, "bdpp_oracle_multiplier: buffer too small");
    for (Eigen::Index r = 0; r < l.size(); ++r) buf[r] = l[r];
    return BDPP_OK;
}

} /* extern "C" */
