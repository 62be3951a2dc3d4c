#include "bdpp/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "bdpp/error.hpp"

namespace bdpp {

namespace {

constexpr double kStochasticTol = 1e-12;

bool union_connected(int n, const std::vector<const Round*>& rounds) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (const Round* round : rounds) {
        for (auto [i, j] : round->edges) {
            adj[static_cast<std::size_t>(i)].push_back(j);
            adj[static_cast<std::size_t>(j)].push_back(i);
        }
    }
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : adj[static_cast<std::size_t>(u)]) {
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = 1;
                ++reached;
                stack.push_back(v);
            }
        }
    }
    return reached == n;
}

}  // namespace

GraphSchedule make_ring_partition_schedule(int n_agents, int window, double lazy_weight) {
    if (n_agents < 2)
        throw Error(ErrorCode::InvalidInput, "ring schedule: need at least 2 agents");
    if (window < 1 || window > n_agents)
        throw Error(ErrorCode::InvalidInput, "ring schedule: window must be in [1, n_agents]");
    if (!(lazy_weight > 0.0) || lazy_weight > 1.0)
        throw Error(ErrorCode::InvalidInput, "ring schedule: lazy_weight must be in (0, 1]");

    GraphSchedule schedule;
    schedule.n_agents = n_agents;
    schedule.window = window;
    schedule.rounds.resize(static_cast<std::size_t>(window));

    // Ring edge k joins agents k and (k+1) mod N; edge k goes to round k % window.
    for (int k = 0; k < n_agents; ++k) {
        int i = k;
        int j = (k + 1) % n_agents;
        if (n_agents == 2 && k == 1) break;  // both ring edges coincide for N=2
        schedule.rounds[static_cast<std::size_t>(k % window)].edges.emplace_back(
            std::min(i, j), std::max(i, j));
    }

    double min_positive = std::numeric_limits<double>::infinity();
    for (auto& round : schedule.rounds) {
        std::sort(round.edges.begin(), round.edges.end());
        std::vector<int> degree(static_cast<std::size_t>(n_agents), 0);
        for (auto [i, j] : round.edges) {
            ++degree[static_cast<std::size_t>(i)];
            ++degree[static_cast<std::size_t>(j)];
        }
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n_agents, n_agents);
        for (auto [i, j] : round.edges) {
            double m = 1.0 / (1.0 + std::max(degree[static_cast<std::size_t>(i)],
                                             degree[static_cast<std::size_t>(j)]));
            w(i, j) = m;
            w(j, i) = m;
        }
        for (int i = 0; i < n_agents; ++i) w(i, i) = 1.0 - w.row(i).sum();
        round.mixing = lazy_weight * w +
                       (1.0 - lazy_weight) * Eigen::MatrixXd::Identity(n_agents, n_agents);
        for (int i = 0; i < n_agents; ++i)
            for (int j = 0; j < n_agents; ++j)
                if (round.mixing(i, j) > 0.0)
                    min_positive = std::min(min_positive, round.mixing(i, j));
    }
    schedule.min_weight = min_positive;

    MixingCheck check = verify_mixing(schedule);
    if (!check.ok)
        throw Error(ErrorCode::Runtime, "ring schedule: generated mixing failed checks: " + check.detail);
    if (!verify_b_connectivity(schedule, window))
        throw Error(ErrorCode::Runtime, "ring schedule: generated schedule not window-connected");
    return schedule;
}

bool verify_b_connectivity(const GraphSchedule& schedule, int window) {
    if (window < 1) throw Error(ErrorCode::InvalidInput, "verify_b_connectivity: window must be >= 1");
    if (schedule.period() == 0 || schedule.n_agents <= 0) return false;

    // Blocks repeat with period lcm(P, window) / window; checking that many
    // aligned blocks covers every alignment the infinite schedule produces.
    long p = schedule.period();
    long cycle = std::lcm(p, static_cast<long>(window));
    long n_blocks = cycle / window;
    for (long b = 0; b < n_blocks; ++b) {
        std::vector<const Round*> rounds;
        rounds.reserve(static_cast<std::size_t>(window));
        for (long t = b * window; t < (b + 1) * window; ++t)
            rounds.push_back(&schedule.rounds[static_cast<std::size_t>(t % p)]);
        if (!union_connected(schedule.n_agents, rounds)) return false;
    }
    return true;
}

MixingCheck verify_mixing(const GraphSchedule& schedule) {
    MixingCheck result;
    double min_positive = std::numeric_limits<double>::infinity();
    const int n = schedule.n_agents;

    auto flag = [&](const std::string& msg) {
        if (result.ok) {
            result.ok = false;
            result.detail = msg;
        }
    };

    for (std::size_t r = 0; r < schedule.rounds.size(); ++r) {
        const Round& round = schedule.rounds[r];
        const Eigen::MatrixXd& w = round.mixing;
        const std::string where = "round " + std::to_string(r) + ": ";
        if (w.rows() != n || w.cols() != n) {
            flag(where + "mixing matrix has wrong shape");
            continue;
        }
        for (int i = 0; i < n; ++i) {
            if (std::abs(w.row(i).sum() - 1.0) > kStochasticTol) flag(where + "row sum != 1");
            if (std::abs(w.col(i).sum() - 1.0) > kStochasticTol) flag(where + "column sum != 1");
        }
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double entry = w(i, j);
                if (entry < 0.0) flag(where + "negative entry");
                if (entry > 0.0) {
                    min_positive = std::min(min_positive, entry);
                    if (i != j) {
                        std::pair<int, int> key{std::min(i, j), std::max(i, j)};
                        if (std::find(round.edges.begin(), round.edges.end(), key) ==
                            round.edges.end())
                            flag(where + "positive entry off the edge set");
                    }
                }
            }
        }
    }

    if (!std::isfinite(min_positive)) min_positive = 0.0;
    result.min_positive_entry = min_positive;
    if (result.ok && min_positive > 0.0 && min_positive < schedule.min_weight - kStochasticTol)
        flag("positive entry below the declared minimum weight");
    return result;
}

}  // namespace bdpp
