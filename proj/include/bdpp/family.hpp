#ifndef BDPP_FAMILY_HPP
#define BDPP_FAMILY_HPP

#include <cstdint>

#include "bdpp/problem.hpp"

namespace bdpp {

/// Random resource-allocation instance: N scalar agents sharing one capacity
/// row,
///
///   minimize  (1/2) sum_i (x_i - a_i)^2
///   s.t.      sum_i d_i x_i <= R_total,    0 <= x_i <= 2,
///
/// recast per agent as g_i(x_i) = d_i x_i - R_total / N so the coupled row is
/// a sum of local functions. Draw order is pinned: R_total in [5, 20] first,
/// then a_i in [1, 2] and d_i in [0.5, 1] for i = 1..N. The stored interior
/// point is x_hat = 0, giving slack R_total.
CoupledProblem make_resource_family(int n_agents, std::uint64_t seed);

}  // namespace bdpp

#endif
