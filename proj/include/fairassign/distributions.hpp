#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "fairassign/random.hpp"

namespace fairassign {

class ProblemInstance;

/// Gaussian conditioned on X >= lower.
struct TruncatedGaussian {
  double mean = 0.0;
  double stddev = 1.0;
  double lower = 0.0;
};

struct Atom {
  double value = 0.0;
  double probability = 0.0;
};

/// Finite distribution. `cdf` is the running sum of probabilities and is
/// kept alongside the support for inverse-CDF sampling.
struct Discrete {
  std::vector<Atom> support;
  std::vector<double> cdf;
};

enum class DistributionKind { kTruncatedGaussian, kDiscrete };

/// Cost model of one agent-task edge. Immutable once built; construct
/// through the make_* factories, which validate parameters.
class Distribution {
 public:
  DistributionKind kind() const {
    return std::holds_alternative<TruncatedGaussian>(model_)
               ? DistributionKind::kTruncatedGaussian
               : DistributionKind::kDiscrete;
  }
  bool is_discrete() const { return kind() == DistributionKind::kDiscrete; }

  const TruncatedGaussian& gaussian() const { return std::get<TruncatedGaussian>(model_); }
  const Discrete& discrete() const { return std::get<Discrete>(model_); }

  /// One independent draw.
  double sample(Rng& rng) const;

  /// Analytic expectation (truncated-normal closed form or support sum).
  double mean() const;

  friend Distribution make_truncated_gaussian(double mean, double stddev, double lower);
  friend Distribution make_discrete(std::vector<Atom> support);
  friend Distribution make_empirical(std::span<const double> values);

 private:
  explicit Distribution(TruncatedGaussian g) : model_(g) {}
  explicit Distribution(Discrete d) : model_(std::move(d)) {}

  std::variant<TruncatedGaussian, Discrete> model_;
};

/// Gaussian(mean, stddev) conditioned on being >= lower.
///
/// Sampling: with a = (lower - mean) / stddev, plain rejection from the
/// untruncated normal when a <= 0.45 (acceptance >= 1/3); otherwise Robert's
/// exponential-proposal rejection sampler for the standardized tail. Both
/// paths consume only the caller's Rng, so draws are seed-deterministic.
Distribution make_truncated_gaussian(double mean, double stddev, double lower);

/// Finite support; values must be strictly positive and probabilities in
/// (0, 1] summing to 1 within 1e-12. Repeated values are merged.
Distribution make_discrete(std::vector<Atom> support);

inline Distribution make_point_mass(double value) { return make_discrete({{value, 1.0}}); }

/// Uniform empirical distribution over observed values (duplicates merged).
/// Unlike make_discrete this admits zero, which arises for travel times
/// between co-located agents and tasks.
Distribution make_empirical(std::span<const double> values);

/// Frozen scenario tensor [scenario][agent][task]. Stored task-major so the
/// S draws of one edge are contiguous; `column(i, j)` exposes them.
class SampleMatrix {
 public:
  /// `data` is laid out [task][agent][scenario]. Entries must be finite and
  /// non-negative.
  SampleMatrix(int scenarios, int agents, int tasks, std::uint64_t seed,
               std::vector<double> data);

  int scenarios() const { return scenarios_; }
  int agents() const { return agents_; }
  int tasks() const { return tasks_; }
  std::uint64_t seed() const { return seed_; }

  double at(int scenario, int agent, int task) const {
    return data_[offset(agent, task) + static_cast<std::size_t>(scenario)];
  }
  std::span<const double> column(int agent, int task) const {
    return {data_.data() + offset(agent, task), static_cast<std::size_t>(scenarios_)};
  }
  const std::vector<double>& raw() const { return data_; }

  bool operator==(const SampleMatrix&) const = default;

 private:
  std::size_t offset(int agent, int task) const {
    return (static_cast<std::size_t>(task) * agents_ + agent) * scenarios_;
  }

  int scenarios_;
  int agents_;
  int tasks_;
  std::uint64_t seed_;
  std::vector<double> data_;
};

inline constexpr int kDefaultScenarios = 100;

/// Draws S scenarios of every edge. Scenario s uses its own stream seeded by
/// derive_seed(seed, 0, s); within a scenario edges are drawn agent-major.
SampleMatrix sample_cost_matrix(const ProblemInstance& instance, int scenarios,
                                std::uint64_t seed);

inline constexpr std::size_t kDefaultSupportCap = 1'000'000;

/// E[min_k X_k] for independent discrete X_k by enumerating the joint
/// support. Throws kTooLarge when the product of support sizes exceeds cap.
double exact_min_expectation(std::span<const Distribution* const> dists,
                             std::size_t support_cap = kDefaultSupportCap);
double exact_min_expectation(std::span<const Distribution> dists,
                             std::size_t support_cap = kDefaultSupportCap);

}  // namespace fairassign
