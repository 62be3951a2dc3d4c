// Command-line experiment runner for the buffered drift-plus-penalty library.
// Talks to the core exclusively through the C interface in bdpp.h.
//
// Subcommands:
//   run               one algorithm on one instance -> CSV + JSON summary
//   sweep             one run per buffer value C, merged CSV, ordering report
//   compare           several algorithms on a shared instance, merged CSV + SVG
//   bounds            constants of the convergence guarantees as JSON
//   validate-schedule connectivity / mixing checks only
//
// Exit codes: 0 success, 2 validation failure, 3 runtime failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bdpp.h"

using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

struct CliError {
    int code;
    std::string message;
};

[[noreturn]] void fail_validation(const std::string& msg) { throw CliError{kExitValidation, msg}; }
[[noreturn]] void fail_runtime(const std::string& msg) { throw CliError{kExitRuntime, msg}; }

void check(bdpp_status status, const std::string& what) {
    if (status == BDPP_OK) return;
    std::string msg = what + ": " + bdpp_status_name(status) + ": " + bdpp_last_error();
    switch (status) {
        case BDPP_ERR_INVALID_ARGUMENT:
        case BDPP_ERR_VALIDATION:
        case BDPP_ERR_PARSE:
        case BDPP_ERR_NOT_AVAILABLE:
        case BDPP_ERR_UNSUPPORTED:
            fail_validation(msg);
        default:
            fail_runtime(msg);
    }
}

std::string take_string(char* s) {
    std::string out = s ? s : "";
    bdpp_string_free(s);
    return out;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_validation("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail_runtime("cannot write '" + path + "'");
    out << content;
}

using ProblemPtr = std::unique_ptr<bdpp_problem, decltype(&bdpp_problem_free)>;
using SchedulePtr = std::unique_ptr<bdpp_schedule, decltype(&bdpp_schedule_free)>;
using RunPtr = std::unique_ptr<bdpp_run, decltype(&bdpp_run_free)>;
using OraclePtr = std::unique_ptr<bdpp_oracle, decltype(&bdpp_oracle_free)>;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct Scenario {
    json config;
    std::string out_dir = "out";
    long horizon = 10000;
    std::uint64_t seed = 1;
    long stride = 0;
    std::string algorithm = "bdpp";
    double bdpp_c = 0.27;
    double dpp_v = 0.0;  // <= 0: sqrt(horizon)
    double dual_a0 = 4.5;
    std::vector<double> sweep_c;
    std::vector<std::string> compare;
    std::optional<std::vector<double>> x0_flat;
};

Scenario load_scenario(const std::string& config_path) {
    Scenario s;
    s.config = json::parse(read_file(config_path), nullptr, false);
    if (s.config.is_discarded()) fail_validation("config '" + config_path + "': malformed JSON");
    const json& c = s.config;
    s.out_dir = c.value("out", s.out_dir);
    s.horizon = c.value("horizon", s.horizon);
    s.seed = c.value("seed", s.seed);
    s.stride = c.value("stride", s.stride);
    s.algorithm = c.value("algorithm", s.algorithm);
    if (c.contains("bdpp")) s.bdpp_c = c.at("bdpp").value("c", s.bdpp_c);
    if (c.contains("dpp")) s.dpp_v = c.at("dpp").value("v", s.dpp_v);
    if (c.contains("dual_subgrad")) s.dual_a0 = c.at("dual_subgrad").value("a0", s.dual_a0);
    if (c.contains("sweep_c")) s.sweep_c = c.at("sweep_c").get<std::vector<double>>();
    if (c.contains("compare")) s.compare = c.at("compare").get<std::vector<std::string>>();
    if (c.contains("x0")) {
        std::vector<double> flat;
        for (const json& agent : c.at("x0"))
            for (const json& v : agent) flat.push_back(v.get<double>());
        s.x0_flat = std::move(flat);
    }
    if (s.horizon < 1) fail_validation("config: horizon must be >= 1");
    return s;
}

ProblemPtr build_problem(const Scenario& s) {
    bdpp_problem* p = nullptr;
    if (!s.config.contains("problem")) fail_validation("config: missing 'problem'");
    const json& jp = s.config.at("problem");
    if (jp.contains("family")) {
        const json& f = jp.at("family");
        check(bdpp_problem_resource_family(f.value("n_agents", 10),
                                           f.value("seed", std::uint64_t{1}), &p),
              "problem generator");
    } else if (jp.contains("path")) {
        check(bdpp_problem_from_json(read_file(jp.at("path").get<std::string>()).c_str(), &p),
              "problem file");
    } else if (jp.contains("inline")) {
        check(bdpp_problem_from_json(jp.at("inline").dump().c_str(), &p), "inline problem");
    } else {
        fail_validation("config: problem needs 'family', 'path', or 'inline'");
    }
    return {p, &bdpp_problem_free};
}

SchedulePtr build_schedule(const Scenario& s, int n_agents) {
    bdpp_schedule* sch = nullptr;
    if (!s.config.contains("schedule")) fail_validation("config: missing 'schedule'");
    const json& js = s.config.at("schedule");
    if (js.contains("ring")) {
        const json& r = js.at("ring");
        check(bdpp_schedule_ring(r.value("n_agents", n_agents), r.value("window", 1),
                                 r.value("lazy_weight", 1.0), &sch),
              "ring schedule");
    } else if (js.contains("path")) {
        check(bdpp_schedule_from_json(read_file(js.at("path").get<std::string>()).c_str(), &sch),
              "schedule file");
    } else if (js.contains("inline")) {
        check(bdpp_schedule_from_json(js.at("inline").dump().c_str(), &sch), "inline schedule");
    } else {
        fail_validation("config: schedule needs 'ring', 'path', or 'inline'");
    }
    return {sch, &bdpp_schedule_free};
}

void validate_schedule_or_die(const bdpp_schedule* schedule, int n_agents) {
    if (bdpp_schedule_n_agents(schedule) != n_agents)
        fail_validation("schedule sized for " + std::to_string(bdpp_schedule_n_agents(schedule)) +
                        " agents, problem has " + std::to_string(n_agents));
    int ok = 0;
    double min_entry = 0.0;
    check(bdpp_schedule_check_mixing(schedule, &ok, &min_entry), "mixing check");
    if (!ok) fail_validation(std::string("mixing matrices invalid: ") + bdpp_last_error());
    int window = bdpp_schedule_window(schedule);
    int connected = bdpp_schedule_check_connectivity(schedule, window);
    if (connected != 1)
        fail_validation("schedule is not connected over windows of length " +
                        std::to_string(window));
}

// Reference optimum; instances outside the oracle's reach run with f_star 0.
double solve_f_star(const bdpp_problem* problem) {
    bdpp_oracle* o = nullptr;
    bdpp_status status = bdpp_oracle_solve(problem, 1e-10, &o);
    if (status == BDPP_ERR_UNSUPPORTED) {
        std::cerr << "note: no reference optimum for this instance; objective_error is the raw "
                     "objective\n";
        return 0.0;
    }
    check(status, "oracle");
    OraclePtr oracle(o, &bdpp_oracle_free);
    return bdpp_oracle_objective(oracle.get());
}

RunPtr execute(const Scenario& s, const bdpp_problem* problem, const bdpp_schedule* schedule,
               const std::string& algorithm, double f_star, std::optional<double> c_override) {
    bdpp_run_options opt;
    bdpp_run_options_init(&opt);
    opt.horizon = s.horizon;
    opt.seed = s.seed;
    opt.record_stride = s.stride;
    opt.f_star = f_star;
    opt.buffer_c = c_override.value_or(s.bdpp_c);
    opt.dpp_v = s.dpp_v;
    opt.dual_step_a0 = s.dual_a0;
    if (s.x0_flat) {
        opt.x0 = s.x0_flat->data();
        opt.x0_len = static_cast<int64_t>(s.x0_flat->size());
    }
    if (algorithm == "bdpp")
        opt.algorithm = BDPP_ALG_BDPP;
    else if (algorithm == "dpp")
        opt.algorithm = BDPP_ALG_DPP;
    else if (algorithm == "dual_subgrad")
        opt.algorithm = BDPP_ALG_DUAL_SUBGRAD;
    else
        fail_validation("unknown algorithm '" + algorithm + "'");

    bdpp_run* run = nullptr;
    check(bdpp_run_execute(problem, schedule, &opt, &run), "run (" + algorithm + ")");
    return {run, &bdpp_run_free};
}

void write_and_verify_csv(const bdpp_run* run, const std::string& path) {
    check(bdpp_run_write_csv(run, path.c_str()), "write " + path);
    int ok = 0;
    char* detail = nullptr;
    check(bdpp_verify_csv(path.c_str(), &ok, &detail), "verify " + path);
    std::string why = take_string(detail);
    if (!ok) fail_runtime("invariant check failed on " + path + ": " + why);
}

std::vector<bdpp_record> all_records(const bdpp_run* run) {
    std::vector<bdpp_record> records(static_cast<std::size_t>(bdpp_run_num_records(run)));
    for (std::size_t i = 0; i < records.size(); ++i)
        check(bdpp_run_record(run, static_cast<int64_t>(i), &records[i]), "record access");
    return records;
}

// ---------------------------------------------------------------------------
// SVG line plots (log-log)
// ---------------------------------------------------------------------------

struct Series {
    std::string label;
    std::vector<double> t;
    std::vector<double> y;  // positive entries only; others dropped
};

std::string svg_plot(const std::string& title, const std::vector<Series>& series) {
    const double width = 640, height = 460, ml = 70, mr = 20, mt = 40, mb = 50;
    double tmin = 1e300, tmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.t.size(); ++i) {
            tmin = std::min(tmin, s.t[i]);
            tmax = std::max(tmax, s.t[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (!(tmax > 0) || !(ymax > 0)) return "<svg xmlns='http://www.w3.org/2000/svg'/>";
    ymin = std::max(ymin, ymax * 1e-12);
    auto lx = [&](double t) {
        return ml + (std::log10(t) - std::log10(tmin)) /
                        std::max(1e-12, std::log10(tmax) - std::log10(tmin)) *
                        (width - ml - mr);
    };
    auto ly = [&](double y) {
        return height - mb - (std::log10(y) - std::log10(ymin)) /
                                 std::max(1e-12, std::log10(ymax) - std::log10(ymin)) *
                                 (height - mt - mb);
    };
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
       << "' font-family='sans-serif' font-size='12'>\n"
       << "<rect width='100%' height='100%' fill='white'/>\n"
       << "<text x='" << width / 2 << "' y='20' text-anchor='middle' font-size='14'>" << title
       << "</text>\n"
       << "<line x1='" << ml << "' y1='" << height - mb << "' x2='" << width - mr << "' y2='"
       << height - mb << "' stroke='black'/>\n"
       << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << height - mb
       << "' stroke='black'/>\n";
    for (int e = static_cast<int>(std::ceil(std::log10(tmin)));
         e <= static_cast<int>(std::floor(std::log10(tmax))); ++e) {
        double x = lx(std::pow(10.0, e));
        os << "<line x1='" << x << "' y1='" << height - mb << "' x2='" << x << "' y2='"
           << height - mb + 5 << "' stroke='black'/>\n"
           << "<text x='" << x << "' y='" << height - mb + 18 << "' text-anchor='middle'>1e" << e
           << "</text>\n";
    }
    for (int e = static_cast<int>(std::ceil(std::log10(ymin)));
         e <= static_cast<int>(std::floor(std::log10(ymax))); ++e) {
        double y = ly(std::pow(10.0, e));
        os << "<line x1='" << ml - 5 << "' y1='" << y << "' x2='" << ml << "' y2='" << y
           << "' stroke='black'/>\n"
           << "<text x='" << ml - 8 << "' y='" << y + 4 << "' text-anchor='end'>1e" << e
           << "</text>\n";
    }
    os << "<text x='" << (ml + width - mr) / 2 << "' y='" << height - 10
       << "' text-anchor='middle'>t</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        os << "<polyline fill='none' stroke='" << colors[k % 6] << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < s.t.size(); ++i)
            os << lx(s.t[i]) << ',' << ly(std::max(s.y[i], ymin)) << ' ';
        os << "'/>\n"
           << "<text x='" << width - mr - 5 << "' y='" << mt + 16 * (k + 1)
           << "' text-anchor='end' fill='" << colors[k % 6] << "'>" << s.label << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

Series positive_series(const std::vector<bdpp_record>& records, const std::string& label,
                       bool violation) {
    Series s;
    s.label = label;
    for (const auto& r : records) {
        double y = violation ? r.max_violation : std::fabs(r.objective_error);
        if (y > 0.0) {
            s.t.push_back(static_cast<double>(r.t));
            s.y.push_back(y);
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_run(const Scenario& s) {
    ProblemPtr problem = build_problem(s);
    SchedulePtr schedule = build_schedule(s, bdpp_problem_num_agents(problem.get()));
    validate_schedule_or_die(schedule.get(), bdpp_problem_num_agents(problem.get()));
    std::filesystem::create_directories(s.out_dir);

    double f_star = solve_f_star(problem.get());
    RunPtr run = execute(s, problem.get(), schedule.get(), s.algorithm, f_star, std::nullopt);
    std::string base = s.out_dir + "/run_" + s.algorithm;
    write_and_verify_csv(run.get(), base + ".csv");
    char* summary = nullptr;
    check(bdpp_run_summary_json(run.get(), &summary), "summary");
    write_file(base + "_summary.json", take_string(summary));
    std::cout << "wrote " << base << ".csv and " << base << "_summary.json\n";
    return 0;
}

int cmd_sweep(const Scenario& s, std::vector<double> c_values) {
    if (c_values.empty()) c_values = s.sweep_c;
    if (c_values.size() < 2) fail_validation("sweep needs at least 2 buffer values");
    if (s.algorithm != "bdpp") fail_validation("sweep applies to the bdpp algorithm");

    ProblemPtr problem = build_problem(s);
    SchedulePtr schedule = build_schedule(s, bdpp_problem_num_agents(problem.get()));
    validate_schedule_or_die(schedule.get(), bdpp_problem_num_agents(problem.get()));
    std::filesystem::create_directories(s.out_dir);
    double f_star = solve_f_star(problem.get());

    std::ostringstream merged;
    merged << "c,t,objective_error,max_violation,queue_sum_norm,drift,drift_bound,"
              "lemma1_slack_min\n";
    std::vector<double> final_err, final_viol;
    std::vector<int64_t> first_feasible;
    for (double c : c_values) {
        RunPtr run = execute(s, problem.get(), schedule.get(), "bdpp", f_star, c);
        std::ostringstream name;
        name << s.out_dir << "/sweep_c" << c << ".csv";
        write_and_verify_csv(run.get(), name.str());
        std::vector<bdpp_record> records = all_records(run.get());
        for (const auto& r : records)
            merged << format_double(c) << ',' << r.t << ',' << format_double(r.objective_error)
                   << ',' << format_double(r.max_violation) << ','
                   << format_double(r.queue_sum_norm) << ',' << format_double(r.drift) << ','
                   << format_double(r.drift_bound) << ',' << format_double(r.lemma1_slack_min)
                   << '\n';
        final_err.push_back(records.back().objective_error);
        final_viol.push_back(records.back().max_violation);
        first_feasible.push_back(bdpp_run_first_feasible_t(run.get()));
    }
    write_file(s.out_dir + "/sweep.csv", merged.str());

    // Trade-off ordering at the final iteration: larger C should cost more
    // objective and violate less. Reported, not enforced; instances are random.
    bool err_sorted = std::is_sorted(final_err.begin(), final_err.end());
    bool viol_sorted = std::is_sorted(final_viol.rbegin(), final_viol.rend());
    json summary;
    summary["c_values"] = c_values;
    summary["final_objective_errors"] = final_err;
    summary["final_max_violations"] = final_viol;
    summary["first_feasible_t"] = first_feasible;
    summary["objective_errors_nondecreasing_in_c"] = err_sorted;
    summary["max_violations_nonincreasing_in_c"] = viol_sorted;
    write_file(s.out_dir + "/sweep_summary.json", summary.dump(2));
    std::cout << "wrote " << s.out_dir << "/sweep.csv (" << c_values.size() << " runs); "
              << "error ordering " << (err_sorted ? "consistent" : "inconsistent") << ", "
              << "violation ordering " << (viol_sorted ? "consistent" : "inconsistent") << "\n";
    return 0;
}

int cmd_compare(const Scenario& s, std::vector<std::string> algorithms, bool plot) {
    if (algorithms.empty()) algorithms = s.compare;
    if (algorithms.empty()) fail_validation("compare needs at least one algorithm");

    ProblemPtr problem = build_problem(s);
    SchedulePtr schedule = build_schedule(s, bdpp_problem_num_agents(problem.get()));
    validate_schedule_or_die(schedule.get(), bdpp_problem_num_agents(problem.get()));
    std::filesystem::create_directories(s.out_dir);
    double f_star = solve_f_star(problem.get());

    std::ostringstream merged;
    merged << "algorithm,t,objective_error,max_violation\n";
    std::vector<Series> err_series, viol_series;
    json summary;
    for (const std::string& alg : algorithms) {
        RunPtr run = execute(s, problem.get(), schedule.get(), alg, f_star, std::nullopt);
        write_and_verify_csv(run.get(), s.out_dir + "/compare_" + alg + ".csv");
        std::vector<bdpp_record> records = all_records(run.get());
        for (const auto& r : records)
            merged << alg << ',' << r.t << ',' << format_double(r.objective_error) << ','
                   << format_double(r.max_violation) << '\n';
        err_series.push_back(positive_series(records, alg, false));
        viol_series.push_back(positive_series(records, alg, true));
        summary[alg] = {{"final_objective_error", records.back().objective_error},
                        {"final_max_violation", records.back().max_violation},
                        {"first_feasible_t", bdpp_run_first_feasible_t(run.get())}};
    }
    write_file(s.out_dir + "/compare.csv", merged.str());
    write_file(s.out_dir + "/compare_summary.json", summary.dump(2));
    if (plot) {
        write_file(s.out_dir + "/objective_error.svg",
                   svg_plot("|objective error| vs t", err_series));
        write_file(s.out_dir + "/violation.svg",
                   svg_plot("positive constraint violation vs t", viol_series));
    }
    std::cout << "wrote " << s.out_dir << "/compare.csv for " << algorithms.size()
              << " algorithm(s)\n";
    return 0;
}

int cmd_bounds(const Scenario& s, std::optional<double> c_flag) {
    ProblemPtr problem = build_problem(s);
    SchedulePtr schedule = build_schedule(s, bdpp_problem_num_agents(problem.get()));
    validate_schedule_or_die(schedule.get(), bdpp_problem_num_agents(problem.get()));

    double F, G, R;
    int exact = 0;
    check(bdpp_problem_constants(problem.get(), &F, &G, &R, &exact), "constants");
    double eps = 0.0;
    check(bdpp_problem_slater_slack(problem.get(), &eps), "slack");
    int ok = 0;
    double a = 0.0;
    check(bdpp_schedule_check_mixing(schedule.get(), &ok, &a), "mixing");

    bdpp_bounds bounds;
    check(bdpp_compute_bounds(F, G, R, eps, bdpp_problem_num_agents(problem.get()),
                              bdpp_schedule_window(schedule.get()), a,
                              bdpp_problem_constraint_dim(problem.get()),
                              c_flag.value_or(s.bdpp_c), &bounds),
          "bounds");
    char* text = nullptr;
    check(bdpp_bounds_json(&bounds, &text), "bounds json");
    std::string out = take_string(text);
    std::cout << out << "\n";
    std::filesystem::create_directories(s.out_dir);
    write_file(s.out_dir + "/bounds.json", out);
    return 0;
}

int cmd_validate_schedule(const Scenario& s) {
    ProblemPtr problem = build_problem(s);
    SchedulePtr schedule = build_schedule(s, bdpp_problem_num_agents(problem.get()));
    validate_schedule_or_die(schedule.get(), bdpp_problem_num_agents(problem.get()));
    std::cout << "schedule ok: " << bdpp_schedule_n_agents(schedule.get()) << " agents, window "
              << bdpp_schedule_window(schedule.get()) << ", min weight "
              << bdpp_schedule_min_weight(schedule.get()) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"buffered drift-plus-penalty experiment runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed_flag;
    std::optional<long> horizon_flag, stride_flag;
    std::optional<std::string> out_flag;
    app.add_option("--config", config_path, "scenario JSON")->required();
    app.add_option("--seed", seed_flag, "override config seed");
    app.add_option("--horizon", horizon_flag, "override config horizon");
    app.add_option("--stride", stride_flag, "override record stride");
    app.add_option("--out", out_flag, "override output directory");

    auto* run_cmd = app.add_subcommand("run", "single run");
    auto* sweep_cmd = app.add_subcommand("sweep", "buffer parameter sweep");
    std::vector<double> c_values;
    sweep_cmd->add_option("--c-values", c_values, "buffer values (else config sweep_c)");
    auto* compare_cmd = app.add_subcommand("compare", "algorithm comparison");
    std::vector<std::string> algorithms;
    bool no_plot = false;
    compare_cmd->add_option("--algorithms", algorithms, "algorithms (else config compare)");
    compare_cmd->add_flag("--no-plot", no_plot, "skip SVG plots");
    auto* bounds_cmd = app.add_subcommand("bounds", "bound constants");
    std::optional<double> c_flag;
    bounds_cmd->add_option("--c", c_flag, "buffer value (else config bdpp.c)");
    auto* validate_cmd = app.add_subcommand("validate-schedule", "check the schedule only");

    CLI11_PARSE(app, argc, argv);

    try {
        Scenario s = load_scenario(config_path);
        if (seed_flag) s.seed = *seed_flag;
        if (horizon_flag) s.horizon = *horizon_flag;
        if (stride_flag) s.stride = *stride_flag;
        if (out_flag) s.out_dir = *out_flag;

        if (run_cmd->parsed()) return cmd_run(s);
        if (sweep_cmd->parsed()) return cmd_sweep(s, c_values);
        if (compare_cmd->parsed()) return cmd_compare(s, algorithms, !no_plot);
        if (bounds_cmd->parsed()) return cmd_bounds(s, c_flag);
        if (validate_cmd->parsed()) return cmd_validate_schedule(s);
        return kExitValidation;
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
