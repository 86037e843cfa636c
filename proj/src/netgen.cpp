#include "fairassign/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include <fmt/format.h>

#include "fairassign/error.hpp"
#include "fairassign/random.hpp"

namespace fairassign {
namespace {

void check_range(const Range& r, const char* what, bool positive) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi ||
      (positive ? !(r.lo > 0.0) : !(r.lo >= 0.0))) {
    throw Error(ErrorKind::kInvalidParameter,
                fmt::format("invalid {} range [{}, {}]", what, r.lo, r.hi));
  }
}

// Distinct nodes for `count` entities, drawn without replacement.
std::vector<int> place(int nodes, int count, Rng& rng) {
  std::vector<int> ids(static_cast<std::size_t>(nodes));
  std::iota(ids.begin(), ids.end(), 0);
  rng.shuffle(ids);
  ids.resize(static_cast<std::size_t>(count));
  return ids;
}

}  // namespace

ProblemInstance random_bipartite(const BipartiteParams& params, std::uint64_t seed) {
  check_range(params.mean, "mean", false);
  check_range(params.stddev, "stddev", true);
  if (params.tasks < 1 || params.agents < params.tasks) {
    throw Error(ErrorKind::kInvalidParameter,
                fmt::format("need N >= M >= 1, got N={} M={}", params.agents, params.tasks));
  }
  const int deployment = params.deployment > 0 ? params.deployment : params.tasks;
  Rng rng(seed);
  std::vector<std::optional<Distribution>> edges;
  edges.reserve(static_cast<std::size_t>(params.agents) * params.tasks);
  for (int i = 0; i < params.agents; ++i) {
    for (int j = 0; j < params.tasks; ++j) {
      const double mean = rng.uniform(params.mean.lo, params.mean.hi);
      const double sd = rng.uniform(params.stddev.lo, params.stddev.hi);
      edges.emplace_back(make_truncated_gaussian(mean, sd, params.truncation));
    }
  }
  return ProblemInstance(params.agents, params.tasks, deployment, std::move(edges));
}

void validate(const TransportNetwork& net) {
  if (net.nodes < 1) throw Error(ErrorKind::kInvalidParameter, "network needs nodes");
  auto check_ids = [&](const std::vector<int>& ids, const char* what) {
    std::vector<int> sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorKind::kInvalidParameter, fmt::format("two {} share a node", what));
    }
    for (int v : ids) {
      if (v < 0 || v >= net.nodes) {
        throw Error(ErrorKind::kInvalidParameter, fmt::format("{} node {} out of range", what, v));
      }
    }
  };
  check_ids(net.agent_nodes, "agents");
  check_ids(net.task_nodes, "tasks");

  // Union-find connectivity.
  std::vector<int> parent(static_cast<std::size_t>(net.nodes));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  int components = net.nodes;
  for (const NetworkEdge& e : net.edges) {
    if (e.u < 0 || e.u >= net.nodes || e.v < 0 || e.v >= net.nodes) {
      throw Error(ErrorKind::kInvalidParameter, fmt::format("edge ({}, {}) out of range", e.u, e.v));
    }
    const int a = find(e.u);
    const int b = find(e.v);
    if (a != b) {
      parent[static_cast<std::size_t>(a)] = b;
      --components;
    }
  }
  if (components != 1) {
    throw Error(ErrorKind::kDisconnected, fmt::format("network has {} components", components));
  }
}

TransportNetwork random_transport_network(const TransportParams& params, std::uint64_t seed) {
  check_range(params.edge_mean, "edge mean", false);
  check_range(params.edge_stddev, "edge stddev", true);
  if (params.agents < 1 || params.tasks < 1 || params.nodes < std::max(params.agents, params.tasks)) {
    throw Error(ErrorKind::kInvalidParameter,
                fmt::format("need nodes >= max(N, M) and N, M >= 1, got nodes={} N={} M={}",
                            params.nodes, params.agents, params.tasks));
  }
  if (!(params.extra_edge_density >= 0.0 && params.extra_edge_density <= 1.0)) {
    throw Error(ErrorKind::kInvalidParameter, "extra edge density must lie in [0, 1]");
  }

  Rng rng(seed);
  const int n = params.nodes;
  auto draw_edge = [&](int u, int v) {
    const double mean = rng.uniform(params.edge_mean.lo, params.edge_mean.hi);
    const double sd = rng.uniform(params.edge_stddev.lo, params.edge_stddev.hi);
    return NetworkEdge{std::min(u, v), std::max(u, v), make_truncated_gaussian(mean, sd, 0.0)};
  };

  TransportNetwork net;
  net.nodes = n;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<bool> adjacent(static_cast<std::size_t>(n) * n, false);
  for (int k = 1; k < n; ++k) {
    const int u = order[static_cast<std::size_t>(k)];
    const int v = order[rng.below(static_cast<std::uint64_t>(k))];
    adjacent[static_cast<std::size_t>(u) * n + v] = adjacent[static_cast<std::size_t>(v) * n + u] = true;
    net.edges.push_back(draw_edge(u, v));
  }
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (adjacent[static_cast<std::size_t>(u) * n + v]) continue;
      if (rng.uniform01() < params.extra_edge_density) net.edges.push_back(draw_edge(u, v));
    }
  }
  net.agent_nodes = place(n, params.agents, rng);
  net.task_nodes = place(n, params.tasks, rng);
  return net;
}

std::vector<double> shortest_paths(int nodes, const std::vector<std::pair<int, int>>& edges,
                                   const std::vector<double>& weights, int source) {
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(nodes));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    adj[static_cast<std::size_t>(edges[e].first)].push_back({edges[e].second, weights[e]});
    adj[static_cast<std::size_t>(edges[e].second)].push_back({edges[e].first, weights[e]});
  }
  std::vector<double> dist(static_cast<std::size_t>(nodes), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[static_cast<std::size_t>(source)] = 0.0;
  queue.push({0.0, source});
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    for (const auto& [v, w] : adj[static_cast<std::size_t>(u)]) {
      const double nd = d + w;
      if (nd < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = nd;
        queue.push({nd, v});
      }
    }
  }
  return dist;
}

std::pair<ProblemInstance, SampleMatrix> network_to_instance(const TransportNetwork& net,
                                                             int deployment, int scenarios,
                                                             std::uint64_t seed) {
  validate(net);
  if (scenarios < 1) throw Error(ErrorKind::kInvalidParameter, "scenario count must be >= 1");
  const int n = static_cast<int>(net.agent_nodes.size());
  const int m = static_cast<int>(net.task_nodes.size());
  const auto s_count = static_cast<std::size_t>(scenarios);

  std::vector<std::pair<int, int>> endpoints;
  endpoints.reserve(net.edges.size());
  for (const NetworkEdge& e : net.edges) endpoints.push_back({e.u, e.v});

  std::vector<double> data(s_count * n * m);
  std::vector<double> weights(net.edges.size());
  for (int s = 0; s < scenarios; ++s) {
    Rng rng(derive_seed(seed, 0, static_cast<std::uint64_t>(s)));
    for (std::size_t e = 0; e < net.edges.size(); ++e) weights[e] = net.edges[e].travel_time.sample(rng);
    for (int j = 0; j < m; ++j) {
      const auto dist = shortest_paths(net.nodes, endpoints, weights, net.task_nodes[static_cast<std::size_t>(j)]);
      for (int i = 0; i < n; ++i) {
        const double d = dist[static_cast<std::size_t>(net.agent_nodes[static_cast<std::size_t>(i)])];
        if (!std::isfinite(d)) {
          throw Error(ErrorKind::kDisconnected,
                      fmt::format("task {} unreachable from agent {}", j, i));
        }
        data[(static_cast<std::size_t>(j) * n + i) * s_count + s] = d;
      }
    }
  }
  SampleMatrix matrix(scenarios, n, m, seed, std::move(data));

  std::vector<std::optional<Distribution>> edges;
  edges.reserve(static_cast<std::size_t>(n) * m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) edges.emplace_back(make_empirical(matrix.column(i, j)));
  }
  return {ProblemInstance(n, m, deployment, std::move(edges)), std::move(matrix)};
}

}  // namespace fairassign
