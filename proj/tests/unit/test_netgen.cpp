#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "fairassign/error.hpp"
#include "fairassign/netgen.hpp"

using namespace fairassign;

namespace {

TransportNetwork fixed_network(int nodes, std::vector<std::pair<int, int>> links, std::vector<double> times,
                               std::vector<int> agents, std::vector<int> tasks) {
  TransportNetwork net;
  net.nodes = nodes;
  for (std::size_t k = 0; k < links.size(); ++k) {
    net.edges.push_back({links[k].first, links[k].second, make_discrete({{times[k], 1.0}})});
  }
  net.agent_nodes = std::move(agents);
  net.task_nodes = std::move(tasks);
  return net;
}

}  // namespace

TEST_SUITE("netgen") {

TEST_CASE("bipartite generator respects its ranges") {
  BipartiteParams bp;
  const ProblemInstance p = random_bipartite(bp, 5);
  CHECK(p.agents() == 18);
  CHECK(p.tasks() == 2);
  CHECK(p.deployment() == 2);
  CHECK(p.complete());
  for (int i = 0; i < p.agents(); ++i) {
    for (int j = 0; j < p.tasks(); ++j) {
      const TruncatedGaussian& g = p.edge(i, j).gaussian();
      CHECK(g.mean >= 15);
      CHECK(g.mean <= 20);
      CHECK(g.stddev >= 5);
      CHECK(g.stddev <= 10);
      CHECK(g.lower == 5);
    }
  }
  bp.deployment = 20;
  CHECK_THROWS_AS(random_bipartite(bp, 5), Error);
}

TEST_CASE("bipartite generator is deterministic per seed") {
  const BipartiteParams bp;
  const ProblemInstance a = random_bipartite(bp, 9), b = random_bipartite(bp, 9), c = random_bipartite(bp, 10);
  CHECK(a.edge(3, 1).gaussian().mean == b.edge(3, 1).gaussian().mean);
  CHECK(a.edge(3, 1).gaussian().mean != c.edge(3, 1).gaussian().mean);
}

TEST_CASE("two-node network gives the edge time") {
  const TransportNetwork net = fixed_network(2, {{0, 1}}, {7.5}, {0}, {1});
  const auto [p, s] = network_to_instance(net, 1, 10, 1);
  for (int k = 0; k < 10; ++k) CHECK(s.at(k, 0, 0) == 7.5);
  CHECK(p.edge(0, 0).mean() == doctest::Approx(7.5));
}

TEST_CASE("shortest paths on a tree and a triangle") {
  // Path 0-1-2-3.
  CHECK(shortest_paths(4, {{0, 1}, {1, 2}, {2, 3}}, {1, 2, 3}, 0) == std::vector<double>{0, 1, 3, 6});
  // Triangle where the two-hop route beats the direct edge.
  CHECK(shortest_paths(3, {{0, 1}, {1, 2}, {0, 2}}, {1, 1, 5}, 0) == std::vector<double>{0, 1, 2});
}

TEST_CASE("co-located agent and task cost zero") {
  const TransportNetwork net = fixed_network(3, {{0, 1}, {1, 2}}, {4, 6}, {0, 2}, {2});
  const auto [p, s] = network_to_instance(net, 1, 5, 1);
  CHECK(s.at(0, 0, 0) == 10);
  CHECK(s.at(0, 1, 0) == 0);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(validate(fixed_network(3, {{0, 1}}, {1}, {0}, {2})), Error);
  try {
    validate(fixed_network(3, {{0, 1}}, {1}, {0}, {2}));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDisconnected);
  }
  CHECK_THROWS_AS(validate(fixed_network(2, {{0, 1}}, {1}, {0, 0}, {1})), Error);
  CHECK_THROWS_AS(validate(fixed_network(2, {{0, 1}}, {1}, {0}, {4})), Error);
}

TEST_CASE("random transport networks are connected with distinct placements") {
  TransportParams tp;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const TransportNetwork net = random_transport_network(tp, seed);
    CHECK_NOTHROW(validate(net));
    CHECK(net.edges.size() >= static_cast<std::size_t>(tp.nodes - 1));
    CHECK(std::set<int>(net.agent_nodes.begin(), net.agent_nodes.end()).size() == 32);
    CHECK(std::set<int>(net.task_nodes.begin(), net.task_nodes.end()).size() == 16);
    for (const NetworkEdge& e : net.edges) {
      CHECK(e.u < e.v);
      CHECK(e.travel_time.gaussian().lower == 0);
    }
  }
  tp.extra_edge_density = 0;
  CHECK(random_transport_network(tp, 1).edges.size() == 49);
}

TEST_CASE("transport instances are deterministic") {
  TransportParams tp;
  tp.nodes = 20;
  tp.agents = 6;
  tp.tasks = 3;
  const TransportNetwork net = random_transport_network(tp, 3);
  const auto a = network_to_instance(net, 4, 20, 7);
  const auto b = network_to_instance(net, 4, 20, 7);
  CHECK(a.second == b.second);
  CHECK(a.first.deployment() == 4);
  for (double v : a.second.raw()) CHECK((v >= 0 && std::isfinite(v)));
}

}  // TEST_SUITE
