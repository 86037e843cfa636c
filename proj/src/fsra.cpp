#include "fairassign/fsra.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "fairassign/error.hpp"

namespace fairassign {

AlphaBound alpha_from_worst_cost(double worst_cost) {
  if (!(worst_cost >= 2.0)) return {1.0, true};
  return {1.0 + std::log(worst_cost - 1.0), false};
}

AlphaBound alpha_bound(const CostEvaluator& ev) {
  return alpha_from_worst_cost(ev.max_cost(Assignment{}));
}

int iteration_budget(int tasks, double xi_max) {
  if (tasks < 1 || !(xi_max > 0.0)) {
    throw Error(ErrorKind::kInvalidParameter, "iteration budget needs M >= 1 and xi_max > 0");
  }
  const double bits = std::ceil(std::log2(static_cast<double>(tasks) * xi_max));
  return std::max(0, static_cast<int>(bits)) + 1;
}

SolveResult solve_fair(const CostEvaluator& ev, int deployment, double alpha,
                       SolveOptions options) {
  const int n = ev.agents();
  const int m = ev.tasks();
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::kInvalidParameter, fmt::format("alpha must be >= 1, got {}", alpha));
  }
  if (deployment < m || deployment > n) {
    throw Error(ErrorKind::kInfeasibleInstance,
                fmt::format("need M <= N_d <= N, got N_d={} (N={}, M={})", deployment, n, m));
  }
  require_covering(ev.initial(), m);

  SolveResult result;
  result.alpha_used = alpha;
  const double relaxed_budget = alpha * static_cast<double>(deployment - m);
  if (relaxed_budget > static_cast<double>(n - m)) {
    result.warnings.push_back(
        fmt::format("relaxed budget alpha*(N_d-M)={:.4g} exceeds the {} free agents; "
                    "effective budget is N-M",
                    relaxed_budget, n - m));
  }

  const double step_threshold = 1.0 / static_cast<double>(m);
  double xi_min = 0.0;
  double xi_max = ev.max_cost(Assignment{});
  Assignment incumbent;

  while (xi_max - xi_min >= step_threshold) {
    const double xi = 0.5 * (xi_min + xi_max);
    BudgetSolveOutcome candidate = greedy_redundant_assignment(ev, xi, options.mode);
    BisectionStep step;
    step.xi = xi;
    step.candidate_size = candidate.assignment.size();
    step.status = candidate.status;
    step.accepted = candidate.feasible() &&
                    static_cast<double>(candidate.assignment.size()) <= relaxed_budget;
    if (step.accepted) {
      xi_max = xi;
      incumbent = std::move(candidate.assignment);
    } else {
      xi_min = xi;
    }
    step.xi_min = xi_min;
    step.xi_max = xi_max;
    result.trace.push_back(step);
  }

  result.iterations = static_cast<int>(result.trace.size());
  result.xi = xi_max;
  result.xi_min = xi_min;
  result.deployment_used = static_cast<int>(incumbent.size()) + m;
  result.assignment = std::move(incumbent);
  return result;
}

}  // namespace fairassign
