#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fairassign/baselines.hpp"
#include "fairassign/fsra.hpp"
#include "fairassign/json_io.hpp"
#include "fairassign/netgen.hpp"
#include "fairassign/problem.hpp"

namespace fairassign {

enum class GeneratorKind { kBipartite, kTransport };

enum class Policy {
  kFair,             // bisection with alpha = 1
  kFairAlpha,        // bisection with the configured alpha mode
  kUtilitarian,
  kRandom,
  kRepeatThreshold,
  kOracle,
};

enum class InitialPolicy { kBottleneck, kMinSum };

struct AlphaMode {
  enum class Kind { kEq6, kOne, kExplicit };
  Kind kind = Kind::kEq6;
  double value = 1.0;  // used by kExplicit
};

const char* to_string(Policy p);
const char* to_string(InitialPolicy p);
std::string to_string(const AlphaMode& a);
Policy parse_policy(const std::string& s);
InitialPolicy parse_initial(const std::string& s);
/// "eq6", "1"/"one", or a real >= 1.
AlphaMode parse_alpha(const std::string& s);

struct ExperimentConfig {
  GeneratorKind generator = GeneratorKind::kBipartite;
  BipartiteParams bipartite;
  TransportParams transport;
  int trials = 1;
  int samples = kDefaultScenarios;
  std::vector<Policy> policies{Policy::kFair};
  std::vector<int> deployments;
  AlphaMode alpha;
  InitialPolicy initial = InitialPolicy::kBottleneck;
  std::uint64_t seed = 0;
  double oracle_cap = kDefaultOracleCap;
  /// Record wall-clock times; off by default so reports are byte-stable.
  bool timing = false;
  /// Worker threads for trials; 0 picks the hardware concurrency.
  int threads = 1;

  int agents() const;
  int tasks() const;
};

/// Throws kParse for malformed documents, kInvalidParameter for values that
/// break the config invariants (trials >= 1, every N_d in [M, N], ...).
ExperimentConfig config_from_json(const Json& j);
Json to_json(const ExperimentConfig& c);
void validate(const ExperimentConfig& c);

/// Seed streams derived from the master seed; trial t's instance and
/// scenarios depend only on (master, t).
enum SeedStream : std::uint64_t {
  kInstanceStream = 1,
  kScenarioStream = 2,
  kPolicyStream = 3,
};

/// Everything a policy needs for one trial.
struct TrialSetup {
  int trial = 0;
  CostEvaluator evaluator;
  CostMatrix mean_costs;
  std::vector<double> initial_costs;
};

TrialSetup build_trial(const ExperimentConfig& config, int trial);

struct ReportRow {
  int trial = 0;
  Policy policy = Policy::kFair;
  int deployment = 0;
  /// Relaxation used by bisection policies; NaN otherwise.
  double alpha = 0.0;
  int redundant = 0;
  int deployment_used = 0;
  int iterations = 0;
  double max_before = 0.0;
  double max_after = 0.0;
  double mean_before = 0.0;
  double mean_after = 0.0;
  double pct_max_initial = 0.0;
  double pct_mean_initial = 0.0;
  /// Present when the oracle ran for this (trial, N_d).
  std::optional<double> oracle_max;
  std::optional<double> pct_max_oracle;
  bool oracle_skipped = false;
  bool worst_improved = false;
  /// '1'/'0' per task in id order: task cost strictly decreased.
  std::string improved_tasks;
  /// Same flags ordered by increasing initial task cost.
  std::string improved_by_rank;
  double wall_ms = 0.0;
};

/// 100 * (value - reference) / reference.
double percent_difference(double value, double reference);

/// Runs every (trial, N_d, policy) combination. Rows are ordered by trial,
/// then N_d in config order, then policy in config order, regardless of
/// thread count.
std::vector<ReportRow> run_experiment(const ExperimentConfig& config);

/// Rows of one trial.
std::vector<ReportRow> run_trial(const ExperimentConfig& config, int trial);

inline constexpr const char* kReportFormatVersion = "fairassign-report v1";

void write_rows_csv(std::ostream& out, const std::vector<ReportRow>& rows);
Json rows_to_json(const std::vector<ReportRow>& rows);

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

/// Linear-interpolation quartiles. Requires a nonempty input.
Quartiles quartiles(std::vector<double> values);

struct SummaryRow {
  Policy policy = Policy::kFair;
  int deployment = 0;
  int count = 0;
  Quartiles pct_max_initial;
  Quartiles pct_mean_initial;
  std::optional<Quartiles> pct_max_oracle;
  double worst_improved_fraction = 0.0;
  /// Among rows with an oracle: max cost within kCostTolerance of the oracle
  /// (or better), and within 10% of it.
  std::optional<double> at_oracle_fraction;
  std::optional<double> within_10pct_fraction;
  double median_deployment_used = 0.0;
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  /// Fraction of trials improving the k-th cheapest task (by initial cost).
  std::vector<double> improved_by_rank_fraction;
};

/// Aggregates per (policy, N_d) in first-appearance order. Throws
/// kInvalidParameter on empty input.
std::vector<SummaryRow> summarize(const std::vector<ReportRow>& rows);

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary);
Json summary_to_json(const std::vector<SummaryRow>& summary);

}  // namespace fairassign
