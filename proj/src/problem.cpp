#include "fairassign/problem.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "fairassign/error.hpp"

namespace fairassign {

ProblemInstance::ProblemInstance(int agents, int tasks, int deployment,
                                 std::vector<std::optional<Distribution>> edges,
                                 std::vector<std::string> agent_labels,
                                 std::vector<std::string> task_labels)
    : agents_(agents),
      tasks_(tasks),
      deployment_(deployment),
      edges_(std::move(edges)),
      agent_labels_(std::move(agent_labels)),
      task_labels_(std::move(task_labels)) {
  if (tasks < 1 || agents < tasks) {
    throw Error(ErrorKind::kInfeasibleInstance,
                fmt::format("need N >= M >= 1, got N={} M={}", agents, tasks));
  }
  if (deployment < tasks || deployment > agents) {
    throw Error(ErrorKind::kInfeasibleInstance,
                fmt::format("need M <= N_d <= N, got N_d={} (N={}, M={})", deployment, agents,
                            tasks));
  }
  if (edges_.size() != static_cast<std::size_t>(agents) * tasks) {
    throw Error(ErrorKind::kInvalidParameter,
                fmt::format("expected {} edge slots, got {}",
                            static_cast<std::size_t>(agents) * tasks, edges_.size()));
  }
  if (!agent_labels_.empty() && agent_labels_.size() != static_cast<std::size_t>(agents)) {
    throw Error(ErrorKind::kInvalidParameter, "agent label count does not match N");
  }
  if (!task_labels_.empty() && task_labels_.size() != static_cast<std::size_t>(tasks)) {
    throw Error(ErrorKind::kInvalidParameter, "task label count does not match M");
  }
}

const Distribution& ProblemInstance::edge(int agent, int task) const {
  if (agent < 0 || agent >= agents_ || task < 0 || task >= tasks_) {
    throw Error(ErrorKind::kInvalidParameter,
                fmt::format("edge ({}, {}) out of range", agent, task));
  }
  const auto& slot = edges_[index(agent, task)];
  if (!slot) {
    throw Error(ErrorKind::kIncompleteInstance,
                fmt::format("no distribution for edge ({}, {})", agent, task));
  }
  return *slot;
}

bool ProblemInstance::complete() const {
  return std::all_of(edges_.begin(), edges_.end(), [](const auto& e) { return e.has_value(); });
}

ProblemInstance ProblemInstance::with_deployment(int deployment) const {
  return ProblemInstance(agents_, tasks_, deployment, edges_, agent_labels_, task_labels_);
}

CostMatrix::CostMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(static_cast<int>(rows.size())),
      cols_(rows.size() == 0 ? 0 : static_cast<int>(rows.begin()->size())) {
  data_.reserve(static_cast<std::size_t>(rows_) * cols_);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != cols_) {
      throw Error(ErrorKind::kInvalidParameter, "ragged cost matrix");
    }
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

CostMatrix mean_cost_matrix(const ProblemInstance& instance) {
  CostMatrix means(instance.agents(), instance.tasks());
  for (int i = 0; i < instance.agents(); ++i) {
    for (int j = 0; j < instance.tasks(); ++j) means(i, j) = instance.edge(i, j).mean();
  }
  return means;
}

CostMatrix mean_cost_matrix(const SampleMatrix& samples) {
  CostMatrix means(samples.agents(), samples.tasks());
  for (int i = 0; i < samples.agents(); ++i) {
    for (int j = 0; j < samples.tasks(); ++j) {
      double total = 0.0;
      for (double v : samples.column(i, j)) total += v;
      means(i, j) = total / samples.scenarios();
    }
  }
  return means;
}

// --- Assignment --------------------------------------------------------------

Assignment::Assignment(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end());
  for (std::size_t k = 1; k < pairs_.size(); ++k) {
    if (pairs_[k].agent == pairs_[k - 1].agent) {
      throw Error(ErrorKind::kInvalidAugmentation,
                  fmt::format("agent {} assigned to more than one task", pairs_[k].agent));
    }
  }
}

bool Assignment::contains(Pair p) const {
  return std::binary_search(pairs_.begin(), pairs_.end(), p);
}

bool Assignment::uses_agent(int agent) const { return task_of(agent).has_value(); }

std::optional<int> Assignment::task_of(int agent) const {
  const auto it = std::lower_bound(pairs_.begin(), pairs_.end(), Pair{agent, INT32_MIN});
  if (it != pairs_.end() && it->agent == agent) return it->task;
  return std::nullopt;
}

std::vector<int> Assignment::agents_for(int task) const {
  std::vector<int> out;
  for (const Pair& p : pairs_) {
    if (p.task == task) out.push_back(p.agent);
  }
  return out;
}

void Assignment::insert(Pair p) {
  if (uses_agent(p.agent)) {
    throw Error(ErrorKind::kInvalidAugmentation,
                fmt::format("agent {} is already assigned", p.agent));
  }
  pairs_.insert(std::lower_bound(pairs_.begin(), pairs_.end(), p), p);
}

Assignment Assignment::with(Pair p) const {
  Assignment out = *this;
  out.insert(p);
  return out;
}

void Assignment::check_range(int agents, int tasks) const {
  for (const Pair& p : pairs_) {
    if (p.agent < 0 || p.agent >= agents || p.task < 0 || p.task >= tasks) {
      throw Error(ErrorKind::kInvalidParameter,
                  fmt::format("pair ({}, {}) out of range for N={} M={}", p.agent, p.task,
                              agents, tasks));
    }
  }
}

bool disjoint_agents(const Assignment& a, const Assignment& b) {
  return std::none_of(a.begin(), a.end(), [&](const Pair& p) { return b.uses_agent(p.agent); });
}

// --- CostEvaluator -----------------------------------------------------------

std::size_t CostEvaluator::KeyHash::operator()(const std::vector<int>& key) const {
  std::size_t h = key.size();
  for (int v : key) {
    h ^= static_cast<std::size_t>(splitmix64(static_cast<std::uint64_t>(v))) + (h << 6) + (h >> 2);
  }
  return h;
}

CostEvaluator::CostEvaluator(EvaluatorBackend backend, ProblemInstance instance,
                             std::optional<SampleMatrix> samples, Assignment initial,
                             EvaluatorOptions options)
    : backend_(backend),
      instance_(std::move(instance)),
      samples_(std::move(samples)),
      initial_(std::move(initial)),
      options_(options) {
  const int n = instance_.agents();
  const int m = instance_.tasks();
  initial_.check_range(n, m);
  initial_agents_.resize(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) initial_agents_[static_cast<std::size_t>(j)] = initial_.agents_for(j);
  cache_.resize(static_cast<std::size_t>(m));
  if (samples_) {
    if (samples_->agents() != n || samples_->tasks() != m) {
      throw Error(ErrorKind::kInvalidParameter,
                  fmt::format("sample matrix is {}x{}, instance is {}x{}", samples_->agents(),
                              samples_->tasks(), n, m));
    }
    scratch_.resize(static_cast<std::size_t>(samples_->scenarios()));
  }
}

CostEvaluator CostEvaluator::from_samples(ProblemInstance instance, SampleMatrix samples,
                                          Assignment initial, EvaluatorOptions options) {
  return CostEvaluator(EvaluatorBackend::kSampleMatrix, std::move(instance), std::move(samples),
                       std::move(initial), options);
}

CostEvaluator CostEvaluator::exact(ProblemInstance instance, Assignment initial,
                                   EvaluatorOptions options) {
  return CostEvaluator(EvaluatorBackend::kExactDiscrete, std::move(instance), std::nullopt,
                       std::move(initial), options);
}

double CostEvaluator::compute(int task, std::span<const int> agents) const {
  double value = 0.0;
  if (backend_ == EvaluatorBackend::kSampleMatrix) {
    const SampleMatrix& m = *samples_;
    const auto first = m.column(agents[0], task);
    std::copy(first.begin(), first.end(), scratch_.begin());
    for (std::size_t k = 1; k < agents.size(); ++k) {
      const auto col = m.column(agents[k], task);
      for (std::size_t s = 0; s < col.size(); ++s) scratch_[s] = std::min(scratch_[s], col[s]);
    }
    double total = 0.0;
    for (double v : scratch_) total += v;
    value = total / m.scenarios();
  } else {
    std::vector<const Distribution*> dists;
    dists.reserve(agents.size());
    for (int a : agents) dists.push_back(&instance_.edge(a, task));
    value = exact_min_expectation(std::span<const Distribution* const>(dists),
                                  options_.support_cap);
  }
  if (options_.integer_costs) value = std::ceil(value - kCostTolerance);
  return value;
}

double CostEvaluator::agent_set_cost(int task, std::span<const int> agents) const {
  if (task < 0 || task >= tasks()) {
    throw Error(ErrorKind::kInvalidParameter, fmt::format("task {} out of range", task));
  }
  if (agents.empty()) {
    throw Error(ErrorKind::kUncoveredTask, fmt::format("task {} has no assigned agent", task));
  }
  auto& table = cache_[static_cast<std::size_t>(task)];
  std::vector<int> key(agents.begin(), agents.end());
  if (auto it = table.find(key); it != table.end()) return it->second;
  const double value = compute(task, agents);
  ++evaluations_;
  table.emplace(std::move(key), value);
  return value;
}

double CostEvaluator::task_cost(int task, const Assignment& redundant) const {
  if (task < 0 || task >= tasks()) {
    throw Error(ErrorKind::kInvalidParameter, fmt::format("task {} out of range", task));
  }
  std::vector<int> agents = initial_agents_[static_cast<std::size_t>(task)];
  for (const Pair& p : redundant) {
    if (initial_.uses_agent(p.agent)) {
      throw Error(ErrorKind::kInvalidAugmentation,
                  fmt::format("agent {} is already used by the initial assignment", p.agent));
    }
    if (p.task == task) agents.push_back(p.agent);
  }
  std::sort(agents.begin(), agents.end());
  return agent_set_cost(task, agents);
}

std::vector<double> CostEvaluator::task_costs(const Assignment& redundant) const {
  std::vector<double> costs(static_cast<std::size_t>(tasks()));
  for (int j = 0; j < tasks(); ++j) costs[static_cast<std::size_t>(j)] = task_cost(j, redundant);
  return costs;
}

double CostEvaluator::max_cost(const Assignment& redundant) const {
  const auto costs = task_costs(redundant);
  return *std::max_element(costs.begin(), costs.end());
}

double CostEvaluator::mean_cost(const Assignment& redundant) const {
  const auto costs = task_costs(redundant);
  double total = 0.0;
  for (double c : costs) total += c;
  return total / static_cast<double>(costs.size());
}

double truncated_avg_cost(const CostEvaluator& ev, const Assignment& redundant, double xi) {
  if (!(xi >= 0.0)) {
    throw Error(ErrorKind::kInvalidParameter, fmt::format("xi must be >= 0, got {}", xi));
  }
  double total = 0.0;
  for (int j = 0; j < ev.tasks(); ++j) total += std::max(ev.task_cost(j, redundant), xi);
  return total / ev.tasks();
}

SetFunction task_cost_function(const CostEvaluator& ev, int task) {
  return [&ev, task](const Assignment& a) { return ev.task_cost(task, a); };
}

SetFunction truncated_avg_function(const CostEvaluator& ev, double xi) {
  return [&ev, xi](const Assignment& a) { return truncated_avg_cost(ev, a, xi); };
}

SetFunction max_cost_function(const CostEvaluator& ev) {
  return [&ev](const Assignment& a) { return ev.max_cost(a); };
}

double marginal_decrease(const SetFunction& f, Pair x, const Assignment& a,
                         const Assignment& initial) {
  if (a.contains(x)) {
    throw Error(ErrorKind::kInvalidAugmentation,
                fmt::format("pair ({}, {}) is already in the set", x.agent, x.task));
  }
  if (initial.uses_agent(x.agent)) {
    throw Error(ErrorKind::kInvalidAugmentation,
                fmt::format("agent {} is used by the initial assignment", x.agent));
  }
  const Assignment grown = a.with(x);  // throws when the agent is used by a
  return f(a) - f(grown);
}

std::vector<Pair> ground_set(int agents, int tasks, const Assignment& initial) {
  std::vector<Pair> ground;
  for (int i = 0; i < agents; ++i) {
    if (initial.uses_agent(i)) continue;
    for (int j = 0; j < tasks; ++j) ground.push_back({i, j});
  }
  return ground;
}

SupermodularityReport check_supermodular(const SetFunction& f, std::span<const Pair> ground,
                                         int trials, std::uint64_t seed,
                                         const Assignment& initial) {
  if (trials < 1) throw Error(ErrorKind::kInvalidParameter, "trials must be >= 1");
  SupermodularityReport report;
  if (ground.empty()) return report;

  Rng rng(seed);
  std::vector<Pair> order(ground.begin(), ground.end());
  for (int t = 0; t < trials; ++t) {
    rng.shuffle(order);
    // B: admissible pairs kept with probability 1/2; A: each of B's pairs
    // kept with probability 1/2.
    Assignment larger;
    Assignment smaller;
    for (const Pair& p : order) {
      if (initial.uses_agent(p.agent) || larger.uses_agent(p.agent)) continue;
      if (rng.below(2) == 0) continue;
      larger.insert(p);
      if (rng.below(2) == 0) smaller.insert(p);
    }
    std::vector<Pair> candidates;
    for (const Pair& p : order) {
      if (!initial.uses_agent(p.agent) && !larger.uses_agent(p.agent)) candidates.push_back(p);
    }
    if (candidates.empty()) {
      ++report.trials_skipped;
      continue;
    }
    const Pair x = candidates[rng.below(candidates.size())];
    const double d_small = marginal_decrease(f, x, smaller, initial);
    const double d_large = marginal_decrease(f, x, larger, initial);
    ++report.trials_run;
    if (d_small < d_large - kCostTolerance) {
      report.violations.push_back({smaller, larger, x, d_small, d_large});
    }
  }
  return report;
}

}  // namespace fairassign
