#pragma once

#include <string>
#include <vector>

#include "fairassign/gra.hpp"
#include "fairassign/problem.hpp"

namespace fairassign {

struct AlphaBound {
  double value = 1.0;
  /// Set when max_j J_j(empty) < 2: the log term is negative (or undefined),
  /// so the bound is clamped to 1 (no relaxation).
  bool clamped = false;
};

/// alpha = 1 + ln(worst_cost - 1), clamped below at 1.
AlphaBound alpha_from_worst_cost(double worst_cost);

/// alpha_from_worst_cost(max_j J_j(empty)) for the evaluator's initial
/// assignment.
AlphaBound alpha_bound(const CostEvaluator& ev);

/// ceil(log2(M * xi_max)) + 1, and at least 1: an upper bound on the number
/// of bisection iterations before the interval shrinks below 1/M.
int iteration_budget(int tasks, double xi_max);

struct BisectionStep {
  double xi = 0.0;
  std::size_t candidate_size = 0;
  BudgetStatus status = BudgetStatus::kInfeasible;
  /// Candidate was feasible and within alpha * (N_d - M).
  bool accepted = false;
  /// Interval after this step's update.
  double xi_min = 0.0;
  double xi_max = 0.0;
};

struct SolveResult {
  Assignment assignment;
  /// Final xi_max: every task cost of `assignment` is at most this.
  double xi = 0.0;
  double xi_min = 0.0;
  std::vector<BisectionStep> trace;
  int iterations = 0;
  double alpha_used = 1.0;
  int deployment_used = 0;
  std::vector<std::string> warnings;
};

struct SolveOptions {
  GreedyMode mode = GreedyMode::kLazy;
};

/// Half-interval search over the cost budget xi.
///
/// Starts from [0, max_j J_j(empty)] and halves until the width drops below
/// 1/M. At each midpoint the greedy sub-solver builds A_s; a feasible A_s
/// with |A_s| <= alpha * (N_d - M) moves xi_max down and becomes the
/// incumbent, anything else moves xi_min up. Returns the last incumbent.
///
/// Throws kInvalidParameter for alpha < 1, kInfeasibleInstance unless
/// M <= deployment <= N, kUncoveredTask if the initial assignment misses a
/// task. A relaxed budget larger than the N - M free agents only warns.
SolveResult solve_fair(const CostEvaluator& ev, int deployment, double alpha,
                       SolveOptions options = {});

}  // namespace fairassign
