#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fairassign/distributions.hpp"

namespace fairassign {

/// Absolute tolerance on cost values for feasibility, equality and
/// supermodularity comparisons.
inline constexpr double kCostTolerance = 1e-9;

/// Agents, tasks, per-edge cost models and the deployment size N_d.
class ProblemInstance {
 public:
  /// `edges` is row-major [agent][task]; an empty optional marks a missing
  /// edge, which is reported when the instance is sampled or evaluated.
  /// Throws kInfeasibleInstance unless N >= M >= 1 and M <= N_d <= N.
  ProblemInstance(int agents, int tasks, int deployment,
                  std::vector<std::optional<Distribution>> edges,
                  std::vector<std::string> agent_labels = {},
                  std::vector<std::string> task_labels = {});

  int agents() const { return agents_; }
  int tasks() const { return tasks_; }
  int deployment() const { return deployment_; }
  int redundant_budget() const { return deployment_ - tasks_; }

  bool has_edge(int agent, int task) const { return edges_[index(agent, task)].has_value(); }
  /// Throws kIncompleteInstance for a missing edge.
  const Distribution& edge(int agent, int task) const;
  bool complete() const;

  const std::vector<std::string>& agent_labels() const { return agent_labels_; }
  const std::vector<std::string>& task_labels() const { return task_labels_; }

  ProblemInstance with_deployment(int deployment) const;

 private:
  std::size_t index(int agent, int task) const {
    return static_cast<std::size_t>(agent) * tasks_ + task;
  }

  int agents_;
  int tasks_;
  int deployment_;
  std::vector<std::optional<Distribution>> edges_;
  std::vector<std::string> agent_labels_;
  std::vector<std::string> task_labels_;
};

/// Dense N x M matrix of real values (mean costs for the initial-assignment
/// solvers).
class CostMatrix {
 public:
  CostMatrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}
  CostMatrix(std::initializer_list<std::initializer_list<double>> rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

 private:
  int rows_;
  int cols_;
  std::vector<double> data_;
};

/// Analytic mean cost of every edge.
CostMatrix mean_cost_matrix(const ProblemInstance& instance);
/// Scenario average of every edge.
CostMatrix mean_cost_matrix(const SampleMatrix& samples);

struct Pair {
  int agent = 0;
  int task = 0;
  auto operator<=>(const Pair&) const = default;
};

/// Set of agent->task pairs with per-agent uniqueness, kept sorted by
/// (agent, task).
class Assignment {
 public:
  Assignment() = default;
  /// Throws kInvalidAugmentation if an agent appears twice.
  explicit Assignment(std::vector<Pair> pairs);

  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  auto begin() const { return pairs_.begin(); }
  auto end() const { return pairs_.end(); }
  const std::vector<Pair>& pairs() const { return pairs_; }

  bool contains(Pair p) const;
  bool uses_agent(int agent) const;
  /// Task of `agent`, if assigned.
  std::optional<int> task_of(int agent) const;
  /// Sorted agents assigned to `task`.
  std::vector<int> agents_for(int task) const;

  /// Adds a pair; throws kInvalidAugmentation if the agent is already used.
  void insert(Pair p);
  Assignment with(Pair p) const;

  /// Throws kInvalidParameter if any id is outside [0, agents) x [0, tasks).
  void check_range(int agents, int tasks) const;

  bool operator==(const Assignment&) const = default;

 private:
  std::vector<Pair> pairs_;
};

/// True when no agent appears in both assignments.
bool disjoint_agents(const Assignment& a, const Assignment& b);

enum class EvaluatorBackend { kSampleMatrix, kExactDiscrete };

struct EvaluatorOptions {
  /// Quantize every task cost up to an integer (ceil with kCostTolerance
  /// slack). Off by default; the worst-case guarantee of the bisection is
  /// exact only for integer-valued costs.
  bool integer_costs = false;
  std::size_t support_cap = kDefaultSupportCap;
};

/// Evaluates J_j(A) = E[min_{i : (i,j) in A u O} C_ij] for redundant sets A
/// given the initial assignment O.
///
/// Values are memoized per task keyed by the sorted set of agents serving
/// it. The cache is not synchronized: an evaluator is single-threaded, and
/// concurrent solves must each own one.
class CostEvaluator {
 public:
  static CostEvaluator from_samples(ProblemInstance instance, SampleMatrix samples,
                                    Assignment initial, EvaluatorOptions options = {});
  static CostEvaluator exact(ProblemInstance instance, Assignment initial,
                             EvaluatorOptions options = {});

  EvaluatorBackend backend() const { return backend_; }
  const ProblemInstance& instance() const { return instance_; }
  const Assignment& initial() const { return initial_; }
  int agents() const { return instance_.agents(); }
  int tasks() const { return instance_.tasks(); }
  const std::optional<SampleMatrix>& samples() const { return samples_; }

  /// J_task(redundant). Throws kUncoveredTask if no agent serves the task,
  /// kInvalidAugmentation if `redundant` reuses an agent of O.
  double task_cost(int task, const Assignment& redundant) const;

  /// Cost of `task` when served by exactly `agents` (sorted, unique).
  double agent_set_cost(int task, std::span<const int> agents) const;

  std::vector<double> task_costs(const Assignment& redundant) const;
  double max_cost(const Assignment& redundant) const;
  double mean_cost(const Assignment& redundant) const;

  /// Number of uncached evaluations performed so far.
  std::size_t evaluations() const { return evaluations_; }

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<int>& key) const;
  };

  CostEvaluator(EvaluatorBackend backend, ProblemInstance instance,
                std::optional<SampleMatrix> samples, Assignment initial,
                EvaluatorOptions options);

  double compute(int task, std::span<const int> agents) const;

  EvaluatorBackend backend_;
  ProblemInstance instance_;
  std::optional<SampleMatrix> samples_;
  Assignment initial_;
  EvaluatorOptions options_;
  std::vector<std::vector<int>> initial_agents_;
  mutable std::vector<std::unordered_map<std::vector<int>, double, KeyHash>> cache_;
  mutable std::vector<double> scratch_;
  mutable std::size_t evaluations_ = 0;
};

/// J-bar(A, xi) = (1/M) sum_j max(J_j(A), xi).
double truncated_avg_cost(const CostEvaluator& ev, const Assignment& redundant, double xi);

/// A set function over redundant assignments.
using SetFunction = std::function<double(const Assignment&)>;

SetFunction task_cost_function(const CostEvaluator& ev, int task);
SetFunction truncated_avg_function(const CostEvaluator& ev, double xi);
SetFunction max_cost_function(const CostEvaluator& ev);

/// f(A) - f(A u {x}). Throws kInvalidAugmentation if x is already in A or
/// its agent is used by A or by `initial`.
double marginal_decrease(const SetFunction& f, Pair x, const Assignment& a,
                         const Assignment& initial = {});

struct SupermodularityViolation {
  Assignment smaller;
  Assignment larger;
  Pair element;
  double decrease_smaller = 0.0;
  double decrease_larger = 0.0;
};

struct SupermodularityReport {
  std::vector<SupermodularityViolation> violations;
  int trials_run = 0;
  /// Trials where B left no admissible x to add.
  int trials_skipped = 0;
};

/// Samples random chains A subset B subset ground and x in ground \ B (all
/// respecting per-agent uniqueness together with `initial`) and records
/// every case with decrease(x|A) < decrease(x|B) - kCostTolerance.
SupermodularityReport check_supermodular(const SetFunction& f, std::span<const Pair> ground,
                                         int trials, std::uint64_t seed,
                                         const Assignment& initial = {});

/// All pairs (i, j) with agent i unused by `initial`.
std::vector<Pair> ground_set(int agents, int tasks, const Assignment& initial);

}  // namespace fairassign
