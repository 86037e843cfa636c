#include "fairassign/json_io.hpp"

#include <fstream>

#include <fmt/format.h>

#include "fairassign/error.hpp"

namespace fairassign {
namespace {

template <typename F>
auto parse_guard(const char* what, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kParse, fmt::format("{}: {}", what, e.what()));
  }
}

}  // namespace

Json to_json(const Distribution& d) {
  if (d.kind() == DistributionKind::kTruncatedGaussian) {
    const TruncatedGaussian& g = d.gaussian();
    return {{"kind", "tgauss"}, {"mean", g.mean}, {"std", g.stddev}, {"lower", g.lower}};
  }
  Json support = Json::array();
  for (const Atom& a : d.discrete().support) support.push_back({a.value, a.probability});
  return {{"kind", "discrete"}, {"support", support}};
}

Distribution distribution_from_json(const Json& j) {
  const std::string kind = parse_guard("distribution", [&] { return j.at("kind").get<std::string>(); });
  if (kind == "tgauss") {
    return parse_guard("tgauss", [&] {
      return make_truncated_gaussian(j.at("mean").get<double>(), j.at("std").get<double>(),
                                     j.at("lower").get<double>());
    });
  }
  if (kind == "discrete") {
    std::vector<Atom> support = parse_guard("discrete", [&] {
      std::vector<Atom> out;
      for (const Json& atom : j.at("support")) {
        if (!atom.is_array() || atom.size() != 2) {
          throw Error(ErrorKind::kParse, "support entries must be [value, probability]");
        }
        out.push_back({atom[0].get<double>(), atom[1].get<double>()});
      }
      return out;
    });
    return make_discrete(std::move(support));
  }
  throw Error(ErrorKind::kParse, fmt::format("unknown distribution kind '{}'", kind));
}

Json to_json(const Assignment& a) {
  Json out = Json::array();
  for (const Pair& p : a) out.push_back({p.agent, p.task});
  return out;
}

Assignment assignment_from_json(const Json& j) {
  std::vector<Pair> pairs = parse_guard("assignment", [&] {
    if (!j.is_array()) throw Error(ErrorKind::kParse, "assignment must be an array");
    std::vector<Pair> out;
    for (const Json& p : j) {
      if (!p.is_array() || p.size() != 2) {
        throw Error(ErrorKind::kParse, "assignment entries must be [agent, task]");
      }
      out.push_back({p[0].get<int>(), p[1].get<int>()});
    }
    return out;
  });
  return Assignment(std::move(pairs));
}

Json to_json(const ProblemInstance& instance) {
  Json costs = Json::array();
  for (int i = 0; i < instance.agents(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < instance.tasks(); ++j) {
      row.push_back(instance.has_edge(i, j) ? to_json(instance.edge(i, j)) : Json(nullptr));
    }
    costs.push_back(std::move(row));
  }
  Json out = {{"agents", instance.agents()},
              {"tasks", instance.tasks()},
              {"deployment", instance.deployment()},
              {"costs", std::move(costs)}};
  if (!instance.agent_labels().empty()) out["agent_labels"] = instance.agent_labels();
  if (!instance.task_labels().empty()) out["task_labels"] = instance.task_labels();
  return out;
}

ProblemInstance instance_from_json(const Json& j) {
  const int n = parse_guard("instance", [&] { return j.at("agents").get<int>(); });
  const int m = parse_guard("instance", [&] { return j.at("tasks").get<int>(); });
  const int nd = parse_guard("instance", [&] { return j.value("deployment", m); });
  const Json& costs = parse_guard("instance", [&]() -> const Json& { return j.at("costs"); });
  if (!costs.is_array() || costs.size() != static_cast<std::size_t>(std::max(n, 0))) {
    throw Error(ErrorKind::kParse, "costs must hold one row per agent");
  }
  std::vector<std::optional<Distribution>> edges;
  for (const Json& row : costs) {
    if (!row.is_array() || row.size() != static_cast<std::size_t>(std::max(m, 0))) {
      throw Error(ErrorKind::kParse, "each cost row must hold one entry per task");
    }
    for (const Json& cell : row) {
      if (cell.is_null()) {
        edges.emplace_back(std::nullopt);
      } else {
        edges.emplace_back(distribution_from_json(cell));
      }
    }
  }
  auto labels = [&](const char* key) {
    return parse_guard("labels", [&] {
      return j.contains(key) ? j.at(key).get<std::vector<std::string>>() : std::vector<std::string>{};
    });
  };
  return ProblemInstance(n, m, nd, std::move(edges), labels("agent_labels"), labels("task_labels"));
}

Json to_json(const TransportNetwork& net) {
  Json edges = Json::array();
  for (const NetworkEdge& e : net.edges) edges.push_back({e.u, e.v, to_json(e.travel_time)});
  return {{"nodes", net.nodes}, {"edges", edges}, {"agents", net.agent_nodes}, {"tasks", net.task_nodes}};
}

TransportNetwork network_from_json(const Json& j) {
  TransportNetwork net;
  parse_guard("network", [&] {
    net.nodes = j.at("nodes").get<int>();
    net.agent_nodes = j.at("agents").get<std::vector<int>>();
    net.task_nodes = j.at("tasks").get<std::vector<int>>();
    for (const Json& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) throw Error(ErrorKind::kParse, "edges must be [u, v, dist]");
      net.edges.push_back({e[0].get<int>(), e[1].get<int>(), distribution_from_json(e[2])});
    }
    return 0;
  });
  validate(net);
  return net;
}

Json to_json(const SolveResult& result) {
  Json trace = Json::array();
  for (const BisectionStep& s : result.trace) {
    trace.push_back({{"xi", s.xi},
                     {"size", s.candidate_size},
                     {"feasible", s.status == BudgetStatus::kFeasible},
                     {"accepted", s.accepted},
                     {"xi_min", s.xi_min},
                     {"xi_max", s.xi_max}});
  }
  return {{"assignment", to_json(result.assignment)},
          {"xi", result.xi},
          {"xi_min", result.xi_min},
          {"iterations", result.iterations},
          {"alpha", result.alpha_used},
          {"deployment_used", result.deployment_used},
          {"trace", std::move(trace)},
          {"warnings", result.warnings}};
}

Json to_json(const OracleResult& result) {
  return {{"assignment", to_json(result.assignment)},
          {"max_cost", result.max_cost},
          {"sets_examined", result.sets_examined}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kParse, fmt::format("cannot open '{}'", path));
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kParse, fmt::format("{}: {}", path, e.what()));
  }
}

}  // namespace fairassign
