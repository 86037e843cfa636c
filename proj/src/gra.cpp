#include "fairassign/gra.hpp"

#include <algorithm>
#include <queue>

#include <fmt/format.h>

#include "fairassign/error.hpp"

namespace fairassign {
namespace {

struct Candidate {
  double decrease;
  int agent;
  int task;
  int version;
};

// Max-heap order: larger decrease first, then lower agent id, then lower task.
struct CandidateBelow {
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.decrease != b.decrease) return a.decrease < b.decrease;
    if (a.agent != b.agent) return a.agent > b.agent;
    return a.task > b.task;
  }
};

class GreedyState {
 public:
  GreedyState(const CostEvaluator& ev, double xi) : ev_(ev), xi_(xi) {
    const int m = ev.tasks();
    served_.resize(static_cast<std::size_t>(m));
    cost_.resize(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
      served_[idx(j)] = ev.initial().agents_for(j);
      cost_[idx(j)] = ev.agent_set_cost(j, served_[idx(j)]);
    }
    used_.assign(static_cast<std::size_t>(ev.agents()), false);
    for (const Pair& p : ev.initial()) used_[static_cast<std::size_t>(p.agent)] = true;
  }

  bool agent_free(int agent) const { return !used_[static_cast<std::size_t>(agent)]; }

  bool has_free_agent() const {
    return std::find(used_.begin(), used_.end(), false) != used_.end();
  }

  bool within_budget() const {
    return *std::max_element(cost_.begin(), cost_.end()) <= xi_ + kCostTolerance;
  }

  double truncated_avg() const {
    double total = 0.0;
    for (double c : cost_) total += std::max(c, xi_);
    return total / static_cast<double>(cost_.size());
  }

  // J-bar(A, xi) - J-bar(A u {(agent, task)}, xi).
  double decrease(int agent, int task) const {
    std::vector<int> grown = served_[idx(task)];
    grown.insert(std::lower_bound(grown.begin(), grown.end(), agent), agent);
    const double after = ev_.agent_set_cost(task, grown);
    return (std::max(cost_[idx(task)], xi_) - std::max(after, xi_)) /
           static_cast<double>(cost_.size());
  }

  void add(int agent, int task) {
    auto& set = served_[idx(task)];
    set.insert(std::lower_bound(set.begin(), set.end(), agent), agent);
    cost_[idx(task)] = ev_.agent_set_cost(task, set);
    used_[static_cast<std::size_t>(agent)] = true;
  }

 private:
  static std::size_t idx(int j) { return static_cast<std::size_t>(j); }

  const CostEvaluator& ev_;
  double xi_;
  std::vector<std::vector<int>> served_;
  std::vector<double> cost_;
  std::vector<bool> used_;
};

}  // namespace

void require_covering(const Assignment& initial, int tasks) {
  std::vector<bool> covered(static_cast<std::size_t>(tasks), false);
  for (const Pair& p : initial) {
    if (p.task >= 0 && p.task < tasks) covered[static_cast<std::size_t>(p.task)] = true;
  }
  for (int j = 0; j < tasks; ++j) {
    if (!covered[static_cast<std::size_t>(j)]) {
      throw Error(ErrorKind::kUncoveredTask,
                  fmt::format("initial assignment leaves task {} without an agent", j));
    }
  }
}

BudgetSolveOutcome greedy_redundant_assignment(const CostEvaluator& ev, double xi,
                                               GreedyMode mode) {
  if (!(xi >= 0.0)) {
    throw Error(ErrorKind::kInvalidParameter, fmt::format("xi must be >= 0, got {}", xi));
  }
  require_covering(ev.initial(), ev.tasks());

  const int n = ev.agents();
  const int m = ev.tasks();
  GreedyState state(ev, xi);
  BudgetSolveOutcome out;

  std::priority_queue<Candidate, std::vector<Candidate>, CandidateBelow> heap;
  std::vector<int> version(static_cast<std::size_t>(m), 0);
  if (mode == GreedyMode::kLazy) {
    for (int i = 0; i < n; ++i) {
      if (!state.agent_free(i)) continue;
      for (int j = 0; j < m; ++j) heap.push({state.decrease(i, j), i, j, 0});
    }
  }

  while (!state.within_budget()) {
    if (!state.has_free_agent()) break;

    Candidate best{-1.0, -1, -1, 0};
    if (mode == GreedyMode::kNaive) {
      for (int i = 0; i < n; ++i) {
        if (!state.agent_free(i)) continue;
        for (int j = 0; j < m; ++j) {
          const double d = state.decrease(i, j);
          if (d > best.decrease) best = {d, i, j, 0};
        }
      }
    } else {
      while (!heap.empty()) {
        Candidate top = heap.top();
        heap.pop();
        if (!state.agent_free(top.agent)) continue;
        const int current = version[static_cast<std::size_t>(top.task)];
        if (top.version != current) {
          heap.push({state.decrease(top.agent, top.task), top.agent, top.task, current});
          continue;
        }
        best = top;
        break;
      }
    }

    if (best.agent < 0 || best.decrease <= kCostTolerance) break;

    state.add(best.agent, best.task);
    ++version[static_cast<std::size_t>(best.task)];
    out.assignment.insert({best.agent, best.task});
    out.steps.push_back({{best.agent, best.task}, best.decrease, state.truncated_avg()});
  }

  out.status = state.within_budget() ? BudgetStatus::kFeasible : BudgetStatus::kInfeasible;
  return out;
}

}  // namespace fairassign
