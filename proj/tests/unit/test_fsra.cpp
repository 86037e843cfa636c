#include <cmath>
#include <vector>

#include "doctest.h"
#include "fairassign/baselines.hpp"
#include "fairassign/error.hpp"
#include "fairassign/fsra.hpp"
#include "support.hpp"

using namespace fairassign;
using namespace fairassign::testing;

TEST_SUITE("fsra") {

TEST_CASE("alpha bound values") {
  CHECK(alpha_from_worst_cost(20).value == doctest::Approx(1 + std::log(19.0)));
  CHECK(alpha_from_worst_cost(20).value == doctest::Approx(3.944).epsilon(1e-3));
  CHECK(alpha_from_worst_cost(2).value == doctest::Approx(1));
  CHECK_FALSE(alpha_from_worst_cost(2).clamped);
  CHECK(alpha_from_worst_cost(1 + std::exp(1.0)).value == doctest::Approx(2));
  const AlphaBound low = alpha_from_worst_cost(1.5);
  CHECK(low.value == 1.0);
  CHECK(low.clamped);
}

TEST_CASE("iteration budget values") {
  CHECK(iteration_budget(2, 20) == 7);
  CHECK(iteration_budget(1, 1) == 1);
  CHECK(iteration_budget(10, 25) == 9);
  CHECK(iteration_budget(4, 0.1) == 1);
  CHECK_THROWS_AS(iteration_budget(0, 5), Error);
}

TEST_CASE("small instance solves to the single redundant agent") {
  const auto ev = CostEvaluator::exact(small_instance(), small_initial());
  const SolveResult r = solve_fair(ev, 3, 1.0);
  CHECK(r.assignment == Assignment({{2, 1}}));
  CHECK(ev.max_cost(r.assignment) == doctest::Approx(12));
  CHECK(r.xi >= 12 - kCostTolerance);
  CHECK(r.xi - r.xi_min < 0.5);
  CHECK(r.iterations <= iteration_budget(2, 14));
  CHECK(r.deployment_used == 3);
}

TEST_CASE("argument checks") {
  const auto ev = CostEvaluator::exact(small_instance(), small_initial());
  CHECK_THROWS_AS(solve_fair(ev, 3, 0.5), Error);
  try {
    (void)solve_fair(ev, 4, 1.0);
    FAIL("expected infeasible");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInfeasibleInstance);
  }
  const SolveResult r = solve_fair(ev, 3, 3.0);
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("no redundancy keeps the initial cost") {
  const auto ev = CostEvaluator::exact(small_instance(2), small_initial());
  const SolveResult r = solve_fair(ev, 2, 1.0);
  CHECK(r.assignment.empty());
  CHECK(r.xi == doctest::Approx(14));
}

TEST_CASE("property: bisection trace is consistent") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    CAPTURE(seed);
    const ProblemInstance p = random_discrete_instance(7, 2, 4, seed);
    const Assignment o({{0, 0}, {1, 1}});
    const auto ev = CostEvaluator::exact(p, o);
    const double alpha = alpha_bound(ev).value;
    const SolveResult r = solve_fair(ev, 4, alpha);
    const double xi_max0 = ev.max_cost({});
    CHECK(r.iterations <= iteration_budget(2, xi_max0));
    CHECK(r.iterations == static_cast<int>(r.trace.size()));
    CHECK(r.xi - r.xi_min < 0.5);
    CHECK(static_cast<double>(r.assignment.size()) <= alpha * 2 + 1e-12);
    CHECK(ev.max_cost(r.assignment) <= r.xi + kCostTolerance);
    CHECK(ev.max_cost(r.assignment) <= ev.max_cost({}) + kCostTolerance);
    CHECK(ev.mean_cost(r.assignment) <= ev.mean_cost({}) + kCostTolerance);
    CHECK(disjoint_agents(r.assignment, o));
    double lo = 0, hi = xi_max0;
    for (const BisectionStep& s : r.trace) {
      CHECK(s.xi == doctest::Approx((lo + hi) / 2));
      if (s.accepted) hi = s.xi; else lo = s.xi;
      CHECK(s.xi_min == lo);
      CHECK(s.xi_max == hi);
    }
  }
}

TEST_CASE("property: lazy and naive solves agree") {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const ProblemInstance p = random_discrete_instance(7, 3, 5, seed);
    const auto ev = CostEvaluator::exact(p, Assignment({{0, 0}, {1, 1}, {2, 2}}));
    SolveOptions naive;
    naive.mode = GreedyMode::kNaive;
    CHECK(solve_fair(ev, 5, 1.0).assignment == solve_fair(ev, 5, 1.0, naive).assignment);
  }
}

TEST_CASE("integer costs keep the solve contract") {
  EvaluatorOptions opts;
  opts.integer_costs = true;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    CAPTURE(seed);
    const ProblemInstance p = random_discrete_instance(7, 2, 4, seed);
    const auto ev = CostEvaluator::exact(p, Assignment({{0, 0}, {1, 1}}), opts);
    const double alpha = alpha_bound(ev).value;
    const SolveResult r = solve_fair(ev, 4, alpha);
    const double cost = ev.max_cost(r.assignment);
    CHECK(cost == std::round(cost));
    CHECK(cost <= r.xi + kCostTolerance);
    CHECK(static_cast<double>(r.assignment.size()) <= alpha * 2 + 1e-12);
  }
}

}  // TEST_SUITE
