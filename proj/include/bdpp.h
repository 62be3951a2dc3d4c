/* bdpp.h - C interface of the buffered drift-plus-penalty simulation library.
 *
 * The library simulates distributed constraint-coupled convex optimization
 * over time-varying networks: N agents each own a convex objective f_i, a
 * convex constraint map g_i, and a box X_i, and jointly minimize
 * sum_i f_i(x_i) subject to sum_i g_i(x_i) <= 0. It provides the buffered
 * drift-plus-penalty algorithm (local virtual queues mixed over a gossip
 * schedule, plus a diminishing buffer added to every queue update), two
 * baselines, bound calculators for the convergence guarantees, and an exact
 * reference solver.
 *
 * All functions return bdpp_status; outputs come through pointers. Objects
 * are opaque handles released with the matching _free call. Handles are
 * immutable after creation and safe to share across threads; the last-error
 * message is thread-local.
 */
#ifndef BDPP_H
#define BDPP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bdpp_status {
    BDPP_OK = 0,
    BDPP_ERR_INVALID_ARGUMENT = 1,
    BDPP_ERR_NOT_AVAILABLE = 2,
    BDPP_ERR_UNSUPPORTED = 3,
    BDPP_ERR_VALIDATION = 4,
    BDPP_ERR_INFEASIBLE = 5,
    BDPP_ERR_PARSE = 6,
    BDPP_ERR_IO = 7,
    BDPP_ERR_RUNTIME = 8
} bdpp_status;

const char* bdpp_status_name(bdpp_status status);

/* Message describing the most recent failure on this thread. */
const char* bdpp_last_error(void);

/* Releases strings returned through char** outputs. */
void bdpp_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Problems                                                            */
/* ------------------------------------------------------------------ */

typedef struct bdpp_problem bdpp_problem;

bdpp_status bdpp_problem_from_json(const char* json_text, bdpp_problem** out);
bdpp_status bdpp_problem_to_json(const bdpp_problem* problem, char** out_json);

/* Random resource-allocation instance: N scalar agents, quadratic costs
 * (1/2)(x_i - a_i)^2 with a_i in [1,2], one coupled capacity row
 * d_i x_i - R/N with d_i in [0.5,1], R in [5,20], boxes [0,2]. */
bdpp_status bdpp_problem_resource_family(int n_agents, uint64_t seed, bdpp_problem** out);

void bdpp_problem_free(bdpp_problem* problem);

int bdpp_problem_num_agents(const bdpp_problem* problem);
int bdpp_problem_constraint_dim(const bdpp_problem* problem);

/* Extremal constants: F (constraint norm), G (objective spread), R (box
 * diameter). *exact is 0 when sampling was needed. */
bdpp_status bdpp_problem_constants(const bdpp_problem* problem, double* f_out, double* g_out,
                                   double* r_out, int* exact);

/* Strict-feasibility margin of the stored interior point. */
bdpp_status bdpp_problem_slater_slack(const bdpp_problem* problem, double* eps_out);

/* ------------------------------------------------------------------ */
/* Communication schedules                                             */
/* ------------------------------------------------------------------ */

typedef struct bdpp_schedule bdpp_schedule;

/* Ring edges distributed round-robin over `window` rounds with Metropolis
 * weights, blended toward identity by lazy_weight in (0,1]. */
bdpp_status bdpp_schedule_ring(int n_agents, int window, double lazy_weight,
                               bdpp_schedule** out);
bdpp_status bdpp_schedule_from_json(const char* json_text, bdpp_schedule** out);
bdpp_status bdpp_schedule_to_json(const bdpp_schedule* schedule, char** out_json);
void bdpp_schedule_free(bdpp_schedule* schedule);

int bdpp_schedule_n_agents(const bdpp_schedule* schedule);
int bdpp_schedule_window(const bdpp_schedule* schedule);
double bdpp_schedule_min_weight(const bdpp_schedule* schedule);

/* 1 when the union graph of every aligned block of `window` rounds is
 * connected, 0 otherwise (negative on error). */
int bdpp_schedule_check_connectivity(const bdpp_schedule* schedule, int window);

/* Doubly-stochastic / support / minimum-weight checks. *ok gets 0 or 1;
 * *min_positive_entry gets the smallest positive mixing entry. */
bdpp_status bdpp_schedule_check_mixing(const bdpp_schedule* schedule, int* ok,
                                       double* min_positive_entry);

/* ------------------------------------------------------------------ */
/* Runs                                                                */
/* ------------------------------------------------------------------ */

typedef enum bdpp_algorithm {
    BDPP_ALG_BDPP = 0,         /* buffered drift-plus-penalty */
    BDPP_ALG_DPP = 1,          /* centralized virtual-queue baseline */
    BDPP_ALG_DUAL_SUBGRAD = 2  /* distributed dual subgradient baseline */
} bdpp_algorithm;

typedef struct bdpp_run_options {
    bdpp_algorithm algorithm;
    int64_t horizon;       /* >= 1 */
    uint64_t seed;         /* initial-point draw */
    int64_t record_stride; /* 0: every iteration up to 1000, then every 10th */
    double f_star;         /* reference optimum subtracted into objective_error */
    double buffer_c;       /* BDPP_ALG_BDPP: gamma_t = buffer_c / sqrt(t) */
    double dpp_v;          /* BDPP_ALG_DPP: trade-off weight; <= 0 -> sqrt(horizon) */
    double dual_step_a0;   /* BDPP_ALG_DUAL_SUBGRAD: step a0 / (t + 1) */
    const double* x0;      /* optional flattened start point (agent dims concatenated) */
    int64_t x0_len;
} bdpp_run_options;

void bdpp_run_options_init(bdpp_run_options* options);

typedef struct bdpp_run bdpp_run;

/* DPP ignores the schedule (it may be NULL for that algorithm). */
bdpp_status bdpp_run_execute(const bdpp_problem* problem, const bdpp_schedule* schedule,
                             const bdpp_run_options* options, bdpp_run** out);
void bdpp_run_free(bdpp_run* run);

typedef struct bdpp_record {
    int64_t t;
    double objective_error;
    double avg_objective;
    double max_violation;
    double queue_sum_norm;
    double drift;
    double drift_bound;      /* NaN when the algorithm defines no bound */
    double lemma1_slack_min; /* NaN when the algorithm defines no slack */
} bdpp_record;

int64_t bdpp_run_num_records(const bdpp_run* run);
bdpp_status bdpp_run_record(const bdpp_run* run, int64_t index, bdpp_record* out);
/* Full violation vector of one record; buf_len must be >= constraint dim. */
bdpp_status bdpp_run_record_violation(const bdpp_run* run, int64_t index, double* buf,
                                      int buf_len);

int64_t bdpp_run_first_feasible_t(const bdpp_run* run);
int64_t bdpp_run_last_infeasible_t(const bdpp_run* run);
double bdpp_run_min_lemma1_slack(const bdpp_run* run);
double bdpp_run_max_drift_excess(const bdpp_run* run);

bdpp_status bdpp_run_write_csv(const bdpp_run* run, const char* path);
bdpp_status bdpp_run_summary_json(const bdpp_run* run, char** out_json);

/* Re-checks an emitted CSV file: lemma1_slack_min >= -1e-9 and
 * drift <= drift_bound + 1e-9 on every row (NaN = not applicable). */
bdpp_status bdpp_verify_csv(const char* path, int* ok, char** detail);

/* ------------------------------------------------------------------ */
/* Analysis                                                            */
/* ------------------------------------------------------------------ */

typedef struct bdpp_bounds {
    /* inputs */
    double f_const, g_const, r_const, eps;
    int n_agents, window;
    double a;
    int p;
    double buffer_c;
    /* derived */
    double r, beta, delta, sigma;
    double c1, c2, cf, cg, c0;
    double t1; /* INFINITY when not finite */
    int degenerate_log;
    int t1_finite;
    int vacuous;
} bdpp_bounds;

bdpp_status bdpp_compute_bounds(double f_const, double g_const, double r_const, double eps,
                                int n_agents, int window, double a, int p, double buffer_c,
                                bdpp_bounds* out);
bdpp_status bdpp_bounds_json(const bdpp_bounds* bounds, char** out_json);

typedef struct bdpp_oracle bdpp_oracle;

/* Reference optimum for quadratic objectives + affine rows over boxes. */
bdpp_status bdpp_oracle_solve(const bdpp_problem* problem, double tol, bdpp_oracle** out);
void bdpp_oracle_free(bdpp_oracle* oracle);

double bdpp_oracle_objective(const bdpp_oracle* oracle);
double bdpp_oracle_kkt_residual(const bdpp_oracle* oracle);
bdpp_status bdpp_oracle_solution(const bdpp_oracle* oracle, int agent, double* buf, int buf_len);
bdpp_status bdpp_oracle_multiplier(const bdpp_oracle* oracle, double* buf, int buf_len);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BDPP_H */
