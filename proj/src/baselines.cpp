#include "fairassign/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "fairassign/error.hpp"
#include "fairassign/gra.hpp"
#include "fairassign/random.hpp"

namespace fairassign {
namespace {

void require_enough_agents(const CostMatrix& c) {
  if (c.cols() < 1 || c.rows() < c.cols()) {
    throw Error(ErrorKind::kInfeasibleInstance,
                fmt::format("need N >= M >= 1 for a one-per-task assignment, got {}x{}",
                            c.rows(), c.cols()));
  }
}

void require_budget(int agents, int tasks, int deployment) {
  if (deployment < tasks || deployment > agents) {
    throw Error(ErrorKind::kInfeasibleInstance,
                fmt::format("need M <= N_d <= N, got N_d={} (N={}, M={})", deployment, agents,
                            tasks));
  }
}

// Kuhn's augmenting-path matching between tasks and `agents` using only
// edges with cost <= threshold. Returns task -> position in `agents`.
class ThresholdMatcher {
 public:
  ThresholdMatcher(const CostMatrix& c, std::span<const int> agents) : c_(c), agents_(agents) {}

  int match(double threshold, std::vector<int>& task_to_slot) {
    threshold_ = threshold;
    slot_to_task_.assign(agents_.size(), -1);
    int size = 0;
    for (int j = 0; j < c_.cols(); ++j) {
      seen_.assign(agents_.size(), false);
      if (augment(j)) ++size;
    }
    task_to_slot.assign(static_cast<std::size_t>(c_.cols()), -1);
    for (std::size_t k = 0; k < slot_to_task_.size(); ++k) {
      if (slot_to_task_[k] >= 0) task_to_slot[static_cast<std::size_t>(slot_to_task_[k])] = static_cast<int>(k);
    }
    return size;
  }

 private:
  bool augment(int task) {
    for (std::size_t k = 0; k < agents_.size(); ++k) {
      if (seen_[k] || c_(agents_[k], task) > threshold_) continue;
      seen_[k] = true;
      if (slot_to_task_[k] < 0 || augment(slot_to_task_[k])) {
        slot_to_task_[k] = task;
        return true;
      }
    }
    return false;
  }

  const CostMatrix& c_;
  std::span<const int> agents_;
  double threshold_ = 0.0;
  std::vector<int> slot_to_task_;
  std::vector<bool> seen_;
};

}  // namespace

std::vector<Pair> bottleneck_matching(const CostMatrix& c, std::span<const int> agents) {
  const int target = std::min(static_cast<int>(agents.size()), c.cols());
  if (target == 0) return {};

  std::vector<double> levels;
  levels.reserve(agents.size() * static_cast<std::size_t>(c.cols()));
  for (int a : agents) {
    for (int j = 0; j < c.cols(); ++j) levels.push_back(c(a, j));
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  ThresholdMatcher matcher(c, agents);
  std::vector<int> task_to_slot;
  std::size_t lo = 0;
  std::size_t hi = levels.size() - 1;  // the largest level always admits a full matching
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (matcher.match(levels[mid], task_to_slot) >= target) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  matcher.match(levels[lo], task_to_slot);

  std::vector<Pair> out;
  for (int j = 0; j < c.cols(); ++j) {
    const int slot = task_to_slot[static_cast<std::size_t>(j)];
    if (slot >= 0) out.push_back({agents[static_cast<std::size_t>(slot)], j});
  }
  return out;
}

Assignment bottleneck_initial_assignment(const CostMatrix& mean_costs) {
  require_enough_agents(mean_costs);
  std::vector<int> agents(static_cast<std::size_t>(mean_costs.rows()));
  for (int i = 0; i < mean_costs.rows(); ++i) agents[static_cast<std::size_t>(i)] = i;
  return Assignment(bottleneck_matching(mean_costs, agents));
}

Assignment min_sum_initial_assignment(const CostMatrix& mean_costs) {
  require_enough_agents(mean_costs);
  // Shortest augmenting paths with row/column potentials; tasks are rows
  // (1-based, n <= m), agents are columns. Column 0 is the virtual root.
  const int n = mean_costs.cols();
  const int m = mean_costs.rows();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<int> owner(static_cast<std::size_t>(m) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(m) + 1, 0);
  auto at = [](auto& vec, int k) -> auto& { return vec[static_cast<std::size_t>(k)]; };

  for (int row = 1; row <= n; ++row) {
    at(owner, 0) = row;
    int col0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(m) + 1, 0);
    do {
      at(used, col0) = true;
      const int row0 = at(owner, col0);
      double delta = inf;
      int col1 = 0;
      for (int col = 1; col <= m; ++col) {
        if (at(used, col)) continue;
        const double reduced = mean_costs(col - 1, row0 - 1) - at(u, row0) - at(v, col);
        if (reduced < at(minv, col)) {
          at(minv, col) = reduced;
          at(way, col) = col0;
        }
        if (at(minv, col) < delta) {
          delta = at(minv, col);
          col1 = col;
        }
      }
      for (int col = 0; col <= m; ++col) {
        if (at(used, col)) {
          at(u, at(owner, col)) += delta;
          at(v, col) -= delta;
        } else {
          at(minv, col) -= delta;
        }
      }
      col0 = col1;
    } while (at(owner, col0) != 0);
    do {
      const int col1 = at(way, col0);
      at(owner, col0) = at(owner, col1);
      col0 = col1;
    } while (col0 != 0);
  }

  std::vector<Pair> pairs;
  for (int col = 1; col <= m; ++col) {
    if (at(owner, col) != 0) pairs.push_back({col - 1, at(owner, col) - 1});
  }
  return Assignment(std::move(pairs));
}

Assignment random_redundant(int agents, int tasks, const Assignment& initial, int deployment,
                            std::uint64_t seed) {
  require_budget(agents, tasks, deployment);
  std::vector<int> free_agents;
  for (int i = 0; i < agents; ++i) {
    if (!initial.uses_agent(i)) free_agents.push_back(i);
  }
  Rng rng(seed);
  rng.shuffle(free_agents);
  const auto count = std::min<std::size_t>(static_cast<std::size_t>(deployment - tasks),
                                           free_agents.size());
  std::vector<Pair> pairs;
  for (std::size_t k = 0; k < count; ++k) {
    pairs.push_back({free_agents[k], static_cast<int>(rng.below(static_cast<std::uint64_t>(tasks)))});
  }
  return Assignment(std::move(pairs));
}

Assignment repeated_threshold(const CostMatrix& mean_costs, const Assignment& initial,
                              int deployment) {
  require_budget(mean_costs.rows(), mean_costs.cols(), deployment);
  std::vector<int> remaining;
  for (int i = 0; i < mean_costs.rows(); ++i) {
    if (!initial.uses_agent(i)) remaining.push_back(i);
  }
  std::size_t budget = static_cast<std::size_t>(deployment - mean_costs.cols());
  Assignment out;
  while (budget > 0 && !remaining.empty()) {
    std::vector<Pair> round = bottleneck_matching(mean_costs, remaining);
    if (round.empty()) break;
    std::sort(round.begin(), round.end(), [&](const Pair& a, const Pair& b) {
      const double ca = mean_costs(a.agent, a.task);
      const double cb = mean_costs(b.agent, b.task);
      if (ca != cb) return ca < cb;
      return a < b;
    });
    if (round.size() > budget) round.resize(budget);
    for (const Pair& p : round) {
      out.insert(p);
      remaining.erase(std::find(remaining.begin(), remaining.end(), p.agent));
    }
    budget -= round.size();
  }
  return out;
}

Assignment utilitarian_redundant(const CostEvaluator& ev, int deployment) {
  const int n = ev.agents();
  const int m = ev.tasks();
  require_budget(n, m, deployment);

  std::vector<std::vector<int>> served(static_cast<std::size_t>(m));
  std::vector<double> cost(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    served[static_cast<std::size_t>(j)] = ev.initial().agents_for(j);
    cost[static_cast<std::size_t>(j)] = ev.agent_set_cost(j, served[static_cast<std::size_t>(j)]);
  }

  Assignment out;
  const auto budget = static_cast<std::size_t>(deployment - m);
  while (out.size() < budget) {
    double best = kCostTolerance;
    Pair choice{-1, -1};
    std::vector<int> grown;
    for (int i = 0; i < n; ++i) {
      if (ev.initial().uses_agent(i) || out.uses_agent(i)) continue;
      for (int j = 0; j < m; ++j) {
        grown = served[static_cast<std::size_t>(j)];
        grown.insert(std::lower_bound(grown.begin(), grown.end(), i), i);
        const double d = cost[static_cast<std::size_t>(j)] - ev.agent_set_cost(j, grown);
        if (d > best) {
          best = d;
          choice = {i, j};
        }
      }
    }
    if (choice.agent < 0) break;
    auto& set = served[static_cast<std::size_t>(choice.task)];
    set.insert(std::lower_bound(set.begin(), set.end(), choice.agent), choice.agent);
    cost[static_cast<std::size_t>(choice.task)] = ev.agent_set_cost(choice.task, set);
    out.insert(choice);
  }
  return out;
}

double oracle_set_count(int free_agents, int tasks, int budget) {
  double total = 0.0;
  double binom = 1.0;  // C(free_agents, k)
  double power = 1.0;  // tasks^k
  for (int k = 0; k <= std::min(budget, free_agents); ++k) {
    total += binom * power;
    binom = binom * (free_agents - k) / (k + 1);
    power *= tasks;
  }
  return total;
}

namespace {

class OracleSearch {
 public:
  OracleSearch(const CostEvaluator& ev, std::vector<int> free_agents, int budget)
      : ev_(ev), free_(std::move(free_agents)), budget_(budget) {
    served_.resize(static_cast<std::size_t>(ev.tasks()));
    for (int j = 0; j < ev.tasks(); ++j) served_[static_cast<std::size_t>(j)] = ev.initial().agents_for(j);
  }

  OracleResult run() {
    visit(0);
    OracleResult r;
    r.assignment = Assignment(best_pairs_);
    r.max_cost = best_cost_;
    r.sets_examined = examined_;
    return r;
  }

 private:
  void visit(std::size_t k) {
    if (k == free_.size() || static_cast<int>(chosen_.size()) == budget_) {
      leaf();
      return;
    }
    visit(k + 1);
    const int agent = free_[k];
    for (int j = 0; j < ev_.tasks(); ++j) {
      auto& set = served_[static_cast<std::size_t>(j)];
      set.insert(std::lower_bound(set.begin(), set.end(), agent), agent);
      chosen_.push_back({agent, j});
      visit(k + 1);
      chosen_.pop_back();
      set.erase(std::lower_bound(set.begin(), set.end(), agent));
    }
  }

  void leaf() {
    ++examined_;
    double worst = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < ev_.tasks(); ++j) {
      worst = std::max(worst, ev_.agent_set_cost(j, served_[static_cast<std::size_t>(j)]));
    }
    // chosen_ is in increasing agent order, i.e. already sorted.
    const bool better =
        worst < best_cost_ ||
        (worst == best_cost_ && (chosen_.size() < best_pairs_.size() ||
                                 (chosen_.size() == best_pairs_.size() && chosen_ < best_pairs_)));
    if (examined_ == 1 || better) {
      best_cost_ = worst;
      best_pairs_ = chosen_;
    }
  }

  const CostEvaluator& ev_;
  std::vector<int> free_;
  int budget_;
  std::vector<std::vector<int>> served_;
  std::vector<Pair> chosen_;
  std::vector<Pair> best_pairs_;
  double best_cost_ = std::numeric_limits<double>::infinity();
  std::size_t examined_ = 0;
};

}  // namespace

OracleResult brute_force_optimal(const CostEvaluator& ev, int deployment, double cap) {
  require_budget(ev.agents(), ev.tasks(), deployment);
  require_covering(ev.initial(), ev.tasks());
  std::vector<int> free_agents;
  for (int i = 0; i < ev.agents(); ++i) {
    if (!ev.initial().uses_agent(i)) free_agents.push_back(i);
  }
  const int budget = deployment - ev.tasks();
  const double count = oracle_set_count(static_cast<int>(free_agents.size()), ev.tasks(), budget);
  if (count > cap) {
    throw Error(ErrorKind::kTooLarge,
                fmt::format("oracle would examine {:.3g} sets, cap is {:.3g}", count, cap));
  }
  return OracleSearch(ev, std::move(free_agents), budget).run();
}

}  // namespace fairassign
