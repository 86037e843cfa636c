#include "fairassign/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "fairassign/error.hpp"
#include "fairassign/problem.hpp"

namespace fairassign {
namespace {

constexpr double kProbabilityTolerance = 1e-12;
// Below this standardized lower bound plain rejection accepts >= 1/3 of draws.
constexpr double kTailSwitch = 0.45;

double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// P(Z >= x) for standard normal Z.
double std_normal_upper(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

// Draw Z ~ N(0,1) conditioned on Z >= a.
double sample_std_truncated(double a, Rng& rng) {
  if (a <= kTailSwitch) {
    for (;;) {
      const double z = rng.normal();
      if (z >= a) return z;
    }
  }
  // Robert (1995): exponential proposal shifted to a with optimal rate.
  const double rate = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double z = a - std::log(rng.uniform_open0()) / rate;
    const double d = z - rate;
    if (rng.uniform01() <= std::exp(-0.5 * d * d)) return z;
  }
}

Discrete build_discrete(std::vector<Atom> support) {
  std::sort(support.begin(), support.end(),
            [](const Atom& x, const Atom& y) { return x.value < y.value; });
  Discrete d;
  for (const Atom& atom : support) {
    if (!d.support.empty() && d.support.back().value == atom.value) {
      d.support.back().probability += atom.probability;
    } else {
      d.support.push_back(atom);
    }
  }
  double running = 0.0;
  d.cdf.reserve(d.support.size());
  for (const Atom& atom : d.support) {
    running += atom.probability;
    d.cdf.push_back(running);
  }
  return d;
}

}  // namespace

Distribution make_truncated_gaussian(double mean, double stddev, double lower) {
  if (!(stddev > 0.0) || !std::isfinite(stddev)) {
    throw Error(ErrorKind::kInvalidParameter,
                fmt::format("truncated gaussian stddev must be positive, got {}", stddev));
  }
  if (!(lower >= 0.0) || !std::isfinite(lower) || !std::isfinite(mean)) {
    throw Error(ErrorKind::kInvalidParameter,
                fmt::format("truncated gaussian needs finite mean and lower >= 0, got "
                            "mean={} lower={}",
                            mean, lower));
  }
  return Distribution(TruncatedGaussian{mean, stddev, lower});
}

Distribution make_discrete(std::vector<Atom> support) {
  if (support.empty()) {
    throw Error(ErrorKind::kInvalidParameter, "discrete distribution needs a support");
  }
  double total = 0.0;
  for (const Atom& atom : support) {
    if (!(atom.value > 0.0) || !std::isfinite(atom.value)) {
      throw Error(ErrorKind::kInvalidParameter,
                  fmt::format("support values must be strictly positive, got {}", atom.value));
    }
    if (!(atom.probability > 0.0 && atom.probability <= 1.0)) {
      throw Error(ErrorKind::kInvalidParameter,
                  fmt::format("probabilities must lie in (0, 1], got {}", atom.probability));
    }
    total += atom.probability;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    throw Error(ErrorKind::kInvalidParameter,
                fmt::format("probabilities sum to {}, expected 1", total));
  }
  return Distribution(build_discrete(std::move(support)));
}

Distribution make_empirical(std::span<const double> values) {
  if (values.empty()) {
    throw Error(ErrorKind::kInvalidParameter, "empirical distribution needs observations");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  if (!(sorted.front() >= 0.0) || !std::isfinite(sorted.back())) {
    throw Error(ErrorKind::kInvalidParameter, "empirical values must be finite and >= 0");
  }
  const double n = static_cast<double>(sorted.size());
  std::vector<Atom> support;
  for (std::size_t k = 0; k < sorted.size();) {
    std::size_t end = k;
    while (end < sorted.size() && sorted[end] == sorted[k]) ++end;
    support.push_back({sorted[k], static_cast<double>(end - k) / n});
    k = end;
  }
  return Distribution(build_discrete(std::move(support)));
}

double Distribution::sample(Rng& rng) const {
  if (const auto* g = std::get_if<TruncatedGaussian>(&model_)) {
    const double a = (g->lower - g->mean) / g->stddev;
    const double x = g->mean + g->stddev * sample_std_truncated(a, rng);
    return std::max(x, g->lower);
  }
  const Discrete& d = std::get<Discrete>(model_);
  const double u = rng.uniform01() * d.cdf.back();
  const auto it = std::upper_bound(d.cdf.begin(), d.cdf.end(), u);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(it - d.cdf.begin()),
                                       d.support.size() - 1);
  return d.support[k].value;
}

double Distribution::mean() const {
  if (const auto* g = std::get_if<TruncatedGaussian>(&model_)) {
    const double a = (g->lower - g->mean) / g->stddev;
    const double tail = std_normal_upper(a);
    if (tail <= 0.0) return g->lower;
    return g->mean + g->stddev * std_normal_pdf(a) / tail;
  }
  double m = 0.0;
  for (const Atom& atom : std::get<Discrete>(model_).support) m += atom.value * atom.probability;
  return m;
}

SampleMatrix::SampleMatrix(int scenarios, int agents, int tasks, std::uint64_t seed,
                           std::vector<double> data)
    : scenarios_(scenarios), agents_(agents), tasks_(tasks), seed_(seed), data_(std::move(data)) {
  if (scenarios < 1 || agents < 1 || tasks < 1) {
    throw Error(ErrorKind::kInvalidParameter, "sample matrix dimensions must be positive");
  }
  if (data_.size() != static_cast<std::size_t>(scenarios) * agents * tasks) {
    throw Error(ErrorKind::kInvalidParameter, "sample matrix data has the wrong size");
  }
  for (double v : data_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::kInvalidParameter, "sample matrix entries must be finite and >= 0");
    }
  }
}

SampleMatrix sample_cost_matrix(const ProblemInstance& instance, int scenarios,
                                std::uint64_t seed) {
  if (scenarios < 1) {
    throw Error(ErrorKind::kInvalidParameter, "scenario count must be >= 1");
  }
  const int n = instance.agents();
  const int m = instance.tasks();
  std::vector<const Distribution*> edges;
  edges.reserve(static_cast<std::size_t>(n) * m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) edges.push_back(&instance.edge(i, j));
  }

  const auto s_count = static_cast<std::size_t>(scenarios);
  std::vector<double> data(s_count * n * m);
  for (int s = 0; s < scenarios; ++s) {
    Rng rng(derive_seed(seed, 0, static_cast<std::uint64_t>(s)));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) {
        const double draw = edges[static_cast<std::size_t>(i) * m + j]->sample(rng);
        data[(static_cast<std::size_t>(j) * n + i) * s_count + s] = draw;
      }
    }
  }
  return SampleMatrix(scenarios, n, m, seed, std::move(data));
}

double exact_min_expectation(std::span<const Distribution* const> dists,
                             std::size_t support_cap) {
  if (dists.empty()) {
    throw Error(ErrorKind::kInvalidParameter, "minimum over an empty set of distributions");
  }
  std::size_t joint = 1;
  for (const Distribution* d : dists) {
    if (!d->is_discrete()) {
      throw Error(ErrorKind::kInvalidParameter, "exact backend requires discrete distributions");
    }
    const std::size_t k = d->discrete().support.size();
    if (joint > support_cap / k) {
      throw Error(ErrorKind::kTooLarge,
                  fmt::format("joint support exceeds cap of {}", support_cap));
    }
    joint *= k;
  }

  // Odometer over the joint support.
  std::vector<std::size_t> digit(dists.size(), 0);
  double expectation = 0.0;
  for (std::size_t outcome = 0; outcome < joint; ++outcome) {
    double probability = 1.0;
    double smallest = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < dists.size(); ++k) {
      const Atom& atom = dists[k]->discrete().support[digit[k]];
      probability *= atom.probability;
      smallest = std::min(smallest, atom.value);
    }
    expectation += probability * smallest;
    for (std::size_t k = 0; k < dists.size(); ++k) {
      if (++digit[k] < dists[k]->discrete().support.size()) break;
      digit[k] = 0;
    }
  }
  return expectation;
}

double exact_min_expectation(std::span<const Distribution> dists, std::size_t support_cap) {
  std::vector<const Distribution*> ptrs;
  ptrs.reserve(dists.size());
  for (const Distribution& d : dists) ptrs.push_back(&d);
  return exact_min_expectation(std::span<const Distribution* const>(ptrs), support_cap);
}

}  // namespace fairassign
