#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "fairassign/baselines.hpp"
#include "fairassign/error.hpp"
#include "support.hpp"

using namespace fairassign;
using namespace fairassign::testing;

namespace {

// Enumerates every one-agent-per-task matching; returns {min bottleneck, min sum}.
std::pair<double, double> enumerate_matchings(const CostMatrix& c) {
  const int n = c.rows(), m = c.cols();
  std::vector<int> chosen(static_cast<std::size_t>(m));
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  double best_max = INFINITY, best_sum = INFINITY;
  auto rec = [&](auto& self, int task, double mx, double sum) -> void {
    if (task == m) {
      best_max = std::min(best_max, mx);
      best_sum = std::min(best_sum, sum);
      return;
    }
    for (int i = 0; i < n; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      used[static_cast<std::size_t>(i)] = 1;
      self(self, task + 1, std::max(mx, c(i, task)), sum + c(i, task));
      used[static_cast<std::size_t>(i)] = 0;
    }
  };
  rec(rec, 0, 0.0, 0.0);
  return {best_max, best_sum};
}

std::pair<double, double> score(const CostMatrix& c, const Assignment& a) {
  double mx = 0, sum = 0;
  for (const Pair& p : a) {
    mx = std::max(mx, c(p.agent, p.task));
    sum += c(p.agent, p.task);
  }
  return {mx, sum};
}

void check_covers(const Assignment& a, int tasks) {
  CHECK(static_cast<int>(a.size()) == tasks);
  for (int j = 0; j < tasks; ++j) CHECK(a.agents_for(j).size() == 1);
}

}  // namespace

TEST_SUITE("baselines") {

TEST_CASE("bottleneck on the 3x2 example") {
  const CostMatrix c{{10, 20}, {12, 14}, {30, 16}};
  const Assignment a = bottleneck_initial_assignment(c);
  CHECK(a == Assignment({{0, 0}, {1, 1}}));
  CHECK(score(c, a).first == 14);
  CHECK(score(c, min_sum_initial_assignment(c)).second == 24);
}

TEST_CASE("bottleneck finds a unique perfect matching at the k-th smallest cost") {
  // The only perfect matching uses the diagonal; off-diagonal entries that
  // could complete another matching are all huge.
  const CostMatrix c{{1, 2, 100}, {100, 3, 100}, {5, 100, 6}};
  CHECK(score(c, bottleneck_initial_assignment(c)).first == 6);
}

TEST_CASE("too few agents is infeasible") {
  const CostMatrix c{{1, 2, 3}, {4, 5, 6}};
  for (auto f : {&bottleneck_initial_assignment, &min_sum_initial_assignment}) {
    try {
      (void)f(c);
      FAIL("expected infeasible");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kInfeasibleInstance);
    }
  }
}

TEST_CASE("property: initial assignments match exhaustive enumeration") {
  Rng rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 1 + static_cast<int>(rng.below(4));
    const int n = m + static_cast<int>(rng.below(static_cast<std::uint64_t>(9 - m)));
    const CostMatrix c = random_matrix(n, m, rng, trial % 2 ? 5 : 0);
    const auto [best_max, best_sum] = enumerate_matchings(c);
    const Assignment b = bottleneck_initial_assignment(c);
    const Assignment h = min_sum_initial_assignment(c);
    check_covers(b, m);
    check_covers(h, m);
    CHECK(score(c, b).first == best_max);
    CHECK(score(c, h).second == doctest::Approx(best_sum).epsilon(1e-12));
  }
}

TEST_CASE("random redundant is uniform over agent-task pairs") {
  const Assignment o({{0, 0}, {1, 1}});
  const int draws = 16000;
  std::map<Pair, int> hits;
  for (int k = 0; k < draws; ++k) {
    const Assignment a = random_redundant(6, 2, o, 3, static_cast<std::uint64_t>(k));
    REQUIRE(a.size() == 1);
    CHECK(disjoint_agents(a, o));
    ++hits[a.pairs().front()];
  }
  CHECK(hits.size() == 8);
  const double p = 1.0 / 8, sigma = std::sqrt(draws * p * (1 - p));
  for (const auto& [pair, count] : hits) CHECK(std::abs(count - draws * p) < 3 * sigma);
}

TEST_CASE("random redundant task choice is uniform per agent") {
  // 4 agents, 2 tasks: both spare agents are deployed, each on a fair coin.
  const Assignment o({{0, 1}, {1, 0}});
  const int draws = 10000;
  int agent2_on_t0 = 0, agent3_on_t0 = 0;
  for (int k = 0; k < draws; ++k) {
    const Assignment a = random_redundant(4, 2, o, 4, static_cast<std::uint64_t>(k) + 777);
    REQUIRE(a.size() == 2);
    agent2_on_t0 += a.task_of(2) == 0;
    agent3_on_t0 += a.task_of(3) == 0;
  }
  const double sigma = std::sqrt(draws * 0.25);
  CHECK(std::abs(agent2_on_t0 - draws / 2) < 3 * sigma);
  CHECK(std::abs(agent3_on_t0 - draws / 2) < 3 * sigma);
  CHECK(random_redundant(4, 2, o, 2, 1).empty());
}

TEST_CASE("random redundant uses the whole budget when it can") {
  const Assignment o({{0, 0}, {1, 1}});
  CHECK(random_redundant(6, 2, o, 5, 1).size() == 3);
  CHECK(random_redundant(6, 2, o, 6, 1).size() == 4);
  CHECK(random_redundant(6, 2, o, 6, 1) == random_redundant(6, 2, o, 6, 1));
}

TEST_CASE("repeated threshold fills rounds and truncates the last one") {
  // Agents 0, 1 are initial. Round two matches {2, 3}, round three {4, 5}.
  const CostMatrix c{{1, 50}, {50, 1}, {5, 50}, {50, 4}, {7, 50}, {50, 8}};
  const Assignment o({{0, 0}, {1, 1}});
  CHECK(repeated_threshold(c, o, 3) == Assignment({{3, 1}}));
  CHECK(repeated_threshold(c, o, 4) == Assignment({{2, 0}, {3, 1}}));
  CHECK(repeated_threshold(c, o, 5) == Assignment({{2, 0}, {3, 1}, {4, 0}}));
  CHECK(repeated_threshold(c, o, 6) == Assignment({{2, 0}, {3, 1}, {4, 0}, {5, 1}}));
  CHECK(repeated_threshold(c, o, 2).empty());
}

TEST_CASE("utilitarian picks the larger sum decrease") {
  // O: t0 = 10, t1 = 20. The spare agent cuts t0 by 2 or t1 by 1.
  const ProblemInstance p = point_mass_instance({{10, 99}, {99, 20}, {8, 19}}, 3);
  const auto ev = CostEvaluator::exact(p, Assignment({{0, 0}, {1, 1}}));
  CHECK(utilitarian_redundant(ev, 3) == Assignment({{2, 0}}));
}

TEST_CASE("oracle on the small instance") {
  const auto ev = CostEvaluator::exact(small_instance(), small_initial());
  const OracleResult r = brute_force_optimal(ev, 3);
  CHECK(r.assignment == Assignment({{2, 1}}));
  CHECK(r.max_cost == doctest::Approx(12));
  CHECK(r.sets_examined == 3);
  CHECK(brute_force_optimal(ev, 2).max_cost == doctest::Approx(14));
}

TEST_CASE("oracle set count and cap") {
  CHECK(oracle_set_count(3, 2, 1) == 7);
  CHECK(oracle_set_count(4, 2, 2) == 1 + 8 + 6 * 4);
  const ProblemInstance p = random_discrete_instance(10, 2, 8, 1);
  const auto ev = CostEvaluator::exact(p, Assignment({{0, 0}, {1, 1}}));
  try {
    (void)brute_force_optimal(ev, 8, 100);
    FAIL("expected cap");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kTooLarge);
  }
}

TEST_CASE("property: oracle beats every policy") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const ProblemInstance p = random_discrete_instance(7, 2, 4, seed);
    const Assignment o({{0, 0}, {1, 1}});
    const auto ev = CostEvaluator::exact(p, o);
    const OracleResult r = brute_force_optimal(ev, 4);
    CHECK(r.assignment.size() <= 2);
    CHECK(ev.max_cost(r.assignment) == doctest::Approx(r.max_cost));
    const CostMatrix means = mean_cost_matrix(p);
    for (const Assignment& a : {utilitarian_redundant(ev, 4), random_redundant(7, 2, o, 4, seed),
                                repeated_threshold(means, o, 4)}) {
      CHECK(a.size() <= 2);
      CHECK(r.max_cost <= ev.max_cost(a) + kCostTolerance);
    }
  }
}

}  // TEST_SUITE
