#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fairassign/problem.hpp"

namespace fairassign {

/// Linear bottleneck assignment by the threshold method: binary search over
/// the sorted distinct costs, testing each threshold with a maximum
/// cardinality bipartite matching. Returns one agent per task minimizing the
/// largest selected cost (rows are agents, columns tasks). Throws
/// kInfeasibleInstance when N < M.
Assignment bottleneck_initial_assignment(const CostMatrix& mean_costs);

/// Bottleneck matching restricted to `agents`: matches min(|agents|, M)
/// tasks while minimizing the largest selected cost.
std::vector<Pair> bottleneck_matching(const CostMatrix& mean_costs, std::span<const int> agents);

/// Rectangular min-sum assignment (Hungarian method with potentials), one
/// agent per task. Throws kInfeasibleInstance when N < M.
Assignment min_sum_initial_assignment(const CostMatrix& mean_costs);

/// N_d - M distinct agents unused by `initial`, chosen uniformly, each sent
/// to a uniformly random task.
Assignment random_redundant(int agents, int tasks, const Assignment& initial, int deployment,
                            std::uint64_t seed);

/// Rounds of bottleneck matching between the still-unused agents and all
/// tasks. A round that would overrun the N_d - M budget keeps its pairs in
/// increasing mean-cost order until the budget is filled.
Assignment repeated_threshold(const CostMatrix& mean_costs, const Assignment& initial,
                              int deployment);

/// Greedy on the sum of task costs: adds the pair with the largest decrease
/// of sum_j J_j until N_d - M pairs are placed or nothing decreases the sum
/// by more than kCostTolerance. Ties to lowest agent, then task.
Assignment utilitarian_redundant(const CostEvaluator& ev, int deployment);

struct OracleResult {
  Assignment assignment;
  double max_cost = 0.0;
  std::size_t sets_examined = 0;
};

inline constexpr double kDefaultOracleCap = 1e7;

/// Number of redundant sets of size <= N_d - M over the free agents.
double oracle_set_count(int free_agents, int tasks, int budget);

/// Exhaustive search over every redundant assignment of size <= N_d - M.
/// Minimizes max_j J_j; ties go to the smaller set, then the
/// lexicographically smaller pair list. Throws kTooLarge when the number of
/// sets exceeds `cap`.
OracleResult brute_force_optimal(const CostEvaluator& ev, int deployment,
                                 double cap = kDefaultOracleCap);

}  // namespace fairassign
