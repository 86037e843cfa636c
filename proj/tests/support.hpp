#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fairassign/distributions.hpp"
#include "fairassign/problem.hpp"
#include "fairassign/random.hpp"

namespace fairassign::testing {

/// Instance whose every edge is a point mass at the given matrix entry.
inline ProblemInstance point_mass_instance(const std::vector<std::vector<double>>& costs,
                                           int deployment) {
  const int n = static_cast<int>(costs.size());
  const int m = static_cast<int>(costs.front().size());
  std::vector<std::optional<Distribution>> edges;
  for (const auto& row : costs) {
    for (double c : row) edges.emplace_back(make_point_mass(c));
  }
  return ProblemInstance(n, m, deployment, std::move(edges));
}

/// 3 agents, 2 tasks. O = {(a0,t0), (a1,t1)} with J_0 = 10, J_1 = 14; agent
/// a2 on t1 is 10 or 30 with equal odds (J_1 drops to 12), on t0 it is 30.
inline ProblemInstance small_instance(int deployment = 3) {
  std::vector<std::optional<Distribution>> edges{
      make_point_mass(10), make_point_mass(50),
      make_point_mass(50), make_point_mass(14),
      make_point_mass(30), make_discrete({{10, 0.5}, {30, 0.5}}),
  };
  return ProblemInstance(3, 2, deployment, std::move(edges));
}

inline Assignment small_initial() { return Assignment({{0, 0}, {1, 1}}); }

/// Random discrete instance: every edge has 1..3 integer atoms in [lo, hi].
inline ProblemInstance random_discrete_instance(int n, int m, int deployment, std::uint64_t seed,
                                                int lo = 1, int hi = 30) {
  Rng rng(seed);
  std::vector<std::optional<Distribution>> edges;
  for (int k = 0; k < n * m; ++k) {
    const int atoms = 1 + static_cast<int>(rng.below(3));
    std::vector<Atom> support;
    double left = 1.0;
    for (int a = 0; a < atoms; ++a) {
      const double value = lo + static_cast<double>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
      const double p = a + 1 == atoms ? left : left * rng.uniform(0.2, 0.8);
      support.push_back({value, p});
      left -= p;
    }
    edges.emplace_back(make_discrete(std::move(support)));
  }
  return ProblemInstance(n, m, deployment, std::move(edges));
}

inline CostMatrix random_matrix(int rows, int cols, Rng& rng, int distinct_values = 0) {
  CostMatrix c(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int k = 0; k < cols; ++k) {
      c(r, k) = distinct_values > 0
                    ? 1.0 + static_cast<double>(rng.below(static_cast<std::uint64_t>(distinct_values)))
                    : rng.uniform(1.0, 100.0);
    }
  }
  return c;
}

}  // namespace fairassign::testing
