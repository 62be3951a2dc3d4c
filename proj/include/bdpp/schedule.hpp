#ifndef BDPP_SCHEDULE_HPP
#define BDPP_SCHEDULE_HPP

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace bdpp {

/// One communication round: an undirected edge set plus the mixing matrix
/// applied to the agents' queue variables in that round.
struct Round {
    std::vector<std::pair<int, int>> edges;  // unordered pairs, stored (min,max)
    Eigen::MatrixXd mixing;
};

/// Periodic sequence of communication rounds. The round used at time t is
/// rounds[t % period]. `window` is the connectivity window the schedule
/// claims to satisfy; `min_weight` is the smallest positive mixing entry
/// across all rounds.
struct GraphSchedule {
    int n_agents = 0;
    int window = 1;
    double min_weight = 0.0;
    std::vector<Round> rounds;

    int period() const { return static_cast<int>(rounds.size()); }
    const Round& round_at(long t) const {
        return rounds[static_cast<std::size_t>(t % period())];
    }
};

/// Builds a schedule that distributes the N ring edges {i, i+1 mod N}
/// round-robin over `window` rounds. Each round mixes with Metropolis
/// weights on its own edges, blended toward the identity:
///   W = lazy_weight * W_metropolis + (1 - lazy_weight) * I.
/// The result is symmetric doubly stochastic and connected over every
/// aligned window of length `window`. Requires n_agents >= 2 and
/// 1 <= window <= n_agents; lazy_weight in (0, 1].
GraphSchedule make_ring_partition_schedule(int n_agents, int window, double lazy_weight);

/// True iff the union graph of every aligned block of `window` consecutive
/// rounds (block starts at multiples of `window`, all alignments within one
/// period cycle) is connected.
bool verify_b_connectivity(const GraphSchedule& schedule, int window);

struct MixingCheck {
    bool ok = true;
    double min_positive_entry = 0.0;
    std::string detail;  // first violation found, empty when ok
};

/// Checks every round: entries nonnegative, row and column sums equal to 1
/// within 1e-12, support restricted to the round's edges plus the diagonal,
/// and positive entries no smaller than the schedule's declared min_weight.
/// Directed (asymmetric) matrices are accepted as long as they pass these
/// checks. Returns the smallest positive entry found.
MixingCheck verify_mixing(const GraphSchedule& schedule);

}  // namespace bdpp

#endif
