#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fairassign/distributions.hpp"
#include "fairassign/problem.hpp"

namespace fairassign {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct BipartiteParams {
  int agents = 18;
  int tasks = 2;
  /// Deployment size stored in the instance; defaults to M when <= 0.
  int deployment = 0;
  Range mean{15.0, 20.0};
  Range stddev{5.0, 10.0};
  double truncation = 5.0;
};

/// Fully connected agent-task graph with independent truncated-Gaussian
/// edges; each edge's mean and stddev are drawn uniformly from the ranges.
/// Throws kInvalidParameter for empty/inverted ranges or non-positive stddev.
ProblemInstance random_bipartite(const BipartiteParams& params, std::uint64_t seed);

struct NetworkEdge {
  int u = 0;
  int v = 0;
  Distribution travel_time;
};

/// Undirected road graph with stochastic edge travel times and the node
/// each agent and task sits on.
struct TransportNetwork {
  int nodes = 0;
  std::vector<NetworkEdge> edges;
  std::vector<int> agent_nodes;
  std::vector<int> task_nodes;
};

/// Throws kInvalidParameter / kDisconnected if the network breaks its
/// invariants (bad ids, repeated locations within a class, not connected).
void validate(const TransportNetwork& net);

struct TransportParams {
  int nodes = 50;
  int agents = 32;
  int tasks = 16;
  Range edge_mean{10.0, 20.0};
  Range edge_stddev{5.0, 10.0};
  /// Probability that each node pair outside the spanning tree gets an edge.
  double extra_edge_density = 0.2;
};

/// Random spanning tree (each node, in shuffled order, attaches to a uniform
/// earlier node) plus extra edges with probability `extra_edge_density` per
/// remaining pair. Edge times are Gaussians truncated at zero. Agents and
/// tasks sit on distinct nodes within their class; classes may share nodes.
TransportNetwork random_transport_network(const TransportParams& params, std::uint64_t seed);

/// Per-scenario shortest-path travel times. Scenario s draws every edge once
/// from stream derive_seed(seed, 0, s), then runs Dijkstra from each task
/// node. The instance carries the empirical distribution of each C_ij; the
/// matrix keeps the cross-edge correlation and is what solvers should use.
std::pair<ProblemInstance, SampleMatrix> network_to_instance(const TransportNetwork& net,
                                                             int deployment, int scenarios,
                                                             std::uint64_t seed);

/// Shortest-path distances from `source` under fixed edge weights.
std::vector<double> shortest_paths(int nodes, const std::vector<std::pair<int, int>>& edges,
                                   const std::vector<double>& weights, int source);

}  // namespace fairassign
