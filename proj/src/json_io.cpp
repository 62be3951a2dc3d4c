#include "bdpp/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "bdpp/error.hpp"

namespace bdpp {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(const std::string& msg) { throw Error(ErrorCode::Parse, msg); }

Eigen::VectorXd vector_from_json(const json& j, const char* what) {
    if (!j.is_array()) parse_error(std::string(what) + ": expected an array");
    Eigen::VectorXd v(j.size());
    for (std::size_t k = 0; k < j.size(); ++k) {
        if (!j[k].is_number()) parse_error(std::string(what) + ": expected numbers");
        v[static_cast<Eigen::Index>(k)] = j[k].get<double>();
    }
    return v;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json j = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) j.push_back(v[k]);
    return j;
}

ScalarConvexFn fn_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) parse_error("function: missing kind");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "quadratic")
        return ScalarConvexFn::quadratic(vector_from_json(j.at("center"), "center"),
                                         j.at("weight").get<double>());
    if (kind == "affine")
        return ScalarConvexFn::affine(vector_from_json(j.at("slope"), "slope"),
                                      j.at("offset").get<double>());
    parse_error("function: unknown kind '" + kind + "'");
}

json fn_to_json(const ScalarConvexFn& f) {
    json j;
    switch (f.kind) {
        case ScalarConvexFn::Kind::Quadratic:
            j["kind"] = "quadratic";
            j["center"] = vector_to_json(f.center);
            j["weight"] = f.weight;
            return j;
        case ScalarConvexFn::Kind::Affine:
            j["kind"] = "affine";
            j["slope"] = vector_to_json(f.slope);
            j["offset"] = f.offset;
            return j;
        case ScalarConvexFn::Kind::Custom:
            throw Error(ErrorCode::Unsupported, "custom functions cannot be serialized");
    }
    parse_error("function: unknown kind");
}

json parse_root(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) parse_error("malformed JSON");
    return j;
}

}  // namespace

CoupledProblem problem_from_json(const std::string& text) {
    json j = parse_root(text);
    if (!j.is_object() || !j.contains("agents")) parse_error("problem: missing agents");

    CoupledProblem problem;
    for (const json& ja : j.at("agents")) {
        AgentProblem agent;
        agent.dim = ja.at("dim").get<int>();
        agent.objective = fn_from_json(ja.at("objective"));
        for (const json& row : ja.at("constraint")) agent.constraint.rows.push_back(fn_from_json(row));
        agent.feasible_set.lower = vector_from_json(ja.at("box").at("lower"), "box.lower");
        agent.feasible_set.upper = vector_from_json(ja.at("box").at("upper"), "box.upper");
        problem.agents.push_back(std::move(agent));
    }
    problem.constraint_dim = problem.agents.empty() ? 0 : problem.agents[0].constraint.dim();
    if (j.contains("slater_point")) {
        std::vector<Eigen::VectorXd> pts;
        for (const json& jp : j.at("slater_point"))
            pts.push_back(vector_from_json(jp, "slater_point"));
        problem.slater_point = std::move(pts);
    }
    problem.validate();
    return problem;
}

std::string problem_to_json(const CoupledProblem& problem) {
    json j;
    j["agents"] = json::array();
    for (const auto& agent : problem.agents) {
        json ja;
        ja["dim"] = agent.dim;
        ja["objective"] = fn_to_json(agent.objective);
        ja["constraint"] = json::array();
        for (const auto& row : agent.constraint.rows) ja["constraint"].push_back(fn_to_json(row));
        ja["box"] = {{"lower", vector_to_json(agent.feasible_set.lower)},
                     {"upper", vector_to_json(agent.feasible_set.upper)}};
        j["agents"].push_back(std::move(ja));
    }
    if (problem.slater_point) {
        j["slater_point"] = json::array();
        for (const auto& pt : *problem.slater_point) j["slater_point"].push_back(vector_to_json(pt));
    }
    return j.dump(2);
}

GraphSchedule schedule_from_json(const std::string& text) {
    json j = parse_root(text);
    if (!j.is_object() || !j.contains("rounds")) parse_error("schedule: missing rounds");

    GraphSchedule schedule;
    schedule.n_agents = j.at("n_agents").get<int>();
    schedule.window = j.value("window", 1);
    for (const json& jr : j.at("rounds")) {
        Round round;
        for (const json& je : jr.at("edges")) {
            if (!je.is_array() || je.size() != 2) parse_error("schedule: edge must be a pair");
            int a = je[0].get<int>(), b = je[1].get<int>();
            if (a == b || a < 0 || b < 0 || a >= schedule.n_agents || b >= schedule.n_agents)
                parse_error("schedule: edge endpoints out of range");
            round.edges.emplace_back(std::min(a, b), std::max(a, b));
        }
        const json& jm = jr.at("mixing");
        round.mixing.resize(schedule.n_agents, schedule.n_agents);
        if (static_cast<int>(jm.size()) != schedule.n_agents) parse_error("schedule: mixing rows");
        for (int r = 0; r < schedule.n_agents; ++r) {
            if (static_cast<int>(jm[static_cast<std::size_t>(r)].size()) != schedule.n_agents)
                parse_error("schedule: mixing columns");
            for (int c = 0; c < schedule.n_agents; ++c)
                round.mixing(r, c) = jm[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
        }
        schedule.rounds.push_back(std::move(round));
    }
    if (schedule.rounds.empty()) parse_error("schedule: needs at least one round");

    if (j.contains("min_weight")) {
        schedule.min_weight = j.at("min_weight").get<double>();
    } else {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& round : schedule.rounds)
            for (int r = 0; r < schedule.n_agents; ++r)
                for (int c = 0; c < schedule.n_agents; ++c)
                    if (round.mixing(r, c) > 0.0) m = std::min(m, round.mixing(r, c));
        schedule.min_weight = std::isfinite(m) ? m : 0.0;
    }
    return schedule;
}

std::string schedule_to_json(const GraphSchedule& schedule) {
    json j;
    j["n_agents"] = schedule.n_agents;
    j["window"] = schedule.window;
    j["min_weight"] = schedule.min_weight;
    j["rounds"] = json::array();
    for (const auto& round : schedule.rounds) {
        json jr;
        jr["edges"] = json::array();
        for (auto [a, b] : round.edges) jr["edges"].push_back(json::array({a, b}));
        jr["mixing"] = json::array();
        for (int r = 0; r < schedule.n_agents; ++r) {
            json row = json::array();
            for (int c = 0; c < schedule.n_agents; ++c) row.push_back(round.mixing(r, c));
            jr["mixing"].push_back(std::move(row));
        }
        j["rounds"].push_back(std::move(jr));
    }
    return j.dump(2);
}

std::string bounds_to_json(const BoundsReport& report) {
    json j;
    j["inputs"] = {{"F", report.input.F},       {"G", report.input.G},
                   {"R", report.input.R},       {"eps", report.input.eps},
                   {"n_agents", report.input.n_agents}, {"window", report.input.window},
                   {"a", report.input.a},       {"p", report.input.p},
                   {"buffer_c", report.input.buffer_c}};
    j["r"] = report.r;
    j["beta"] = report.beta;
    j["delta"] = report.delta;
    j["sigma"] = report.sigma;
    j["c1"] = report.c1;
    j["c2"] = report.c2;
    j["cf"] = report.cf;
    j["cg"] = report.cg;
    j["c0"] = report.c0;
    j["t1"] = report.t1_finite ? json(report.t1) : json();
    j["t1_finite"] = report.t1_finite;
    j["degenerate_log"] = report.degenerate_log;
    j["vacuous"] = report.vacuous;
    return j.dump(2);
}

std::string run_summary_json(const RunResult& run) {
    const IterationRecord* last = run.records.empty() ? nullptr : &run.records.back();
    json j;
    j["algorithm"] = run.algorithm;
    j["horizon"] = run.horizon;
    j["f_star"] = run.f_star;
    j["final_objective_error"] = last ? json(last->objective_error) : json();
    j["final_violation"] = last ? json(last->max_violation()) : json();
    j["first_feasible_t"] = run.first_feasible_t;
    j["last_infeasible_t"] = run.last_infeasible_t;
    j["min_lemma1_slack"] =
        std::isfinite(run.min_lemma1_slack) ? json(run.min_lemma1_slack) : json();
    j["max_drift_excess"] =
        std::isfinite(run.max_drift_excess) ? json(run.max_drift_excess) : json();
    j["solver_warning"] = run.solver_warning;
    return j.dump(2);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

}  // namespace bdpp
