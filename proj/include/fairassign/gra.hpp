#pragma once

#include <vector>

#include "fairassign/problem.hpp"

namespace fairassign {

enum class BudgetStatus { kFeasible, kInfeasible };

struct GreedyStep {
  Pair pair;
  /// Marginal decrease of the truncated average J-bar(., xi).
  double decrease = 0.0;
  double truncated_avg_after = 0.0;
};

struct BudgetSolveOutcome {
  BudgetStatus status = BudgetStatus::kInfeasible;
  /// Redundant set built, returned for both statuses.
  Assignment assignment;
  std::vector<GreedyStep> steps;

  bool feasible() const { return status == BudgetStatus::kFeasible; }
};

enum class GreedyMode {
  /// Priority queue of stale marginal decreases; only the top entry is
  /// re-evaluated. Valid because decreases of J-bar never grow as A grows.
  kLazy,
  /// Re-evaluate every candidate pair at every step.
  kNaive,
};

/// Greedy redundant assignment under cost budget xi.
///
/// Repeatedly adds the pair (unused agent, task) with the largest marginal
/// decrease of J-bar(., xi), ties to the lowest agent id then lowest task id.
/// Stops feasible once max_j J_j(A) <= xi (+kCostTolerance), infeasible when
/// agents run out or no pair decreases J-bar by more than kCostTolerance.
/// Throws kUncoveredTask if the evaluator's initial assignment leaves a task
/// without an agent.
BudgetSolveOutcome greedy_redundant_assignment(const CostEvaluator& ev, double xi,
                                               GreedyMode mode = GreedyMode::kLazy);

/// Throws kUncoveredTask naming the first task with no agent in `initial`.
void require_covering(const Assignment& initial, int tasks);

}  // namespace fairassign
