#pragma once

#include <string>

#include "json.hpp"

#include "fairassign/baselines.hpp"
#include "fairassign/distributions.hpp"
#include "fairassign/fsra.hpp"
#include "fairassign/netgen.hpp"
#include "fairassign/problem.hpp"

namespace fairassign {

using Json = nlohmann::json;

// Wire formats:
//   Distribution  {"kind":"tgauss","mean":15.0,"std":5.0,"lower":5.0}
//                 {"kind":"discrete","support":[[10.0,0.5],[30.0,0.5]]}
//   Assignment    [[agent, task], ...]
//   Instance      {"agents":N,"tasks":M,"deployment":Nd,
//                  "costs":[[dist per task] per agent], optional
//                  "agent_labels":[...], "task_labels":[...]}
//                 A null cost marks a missing edge.
//   Network       {"nodes":n,"edges":[[u,v,dist],...],"agents":[...],"tasks":[...]}
// Parsing failures throw Error(kParse); semantic failures keep the kind
// raised by the constructors (kInvalidParameter, kInfeasibleInstance, ...).

Json to_json(const Distribution& d);
Distribution distribution_from_json(const Json& j);

Json to_json(const Assignment& a);
Assignment assignment_from_json(const Json& j);

Json to_json(const ProblemInstance& instance);
ProblemInstance instance_from_json(const Json& j);

Json to_json(const TransportNetwork& net);
TransportNetwork network_from_json(const Json& j);

Json to_json(const SolveResult& result);
Json to_json(const OracleResult& result);

/// Reads and parses a JSON file; kParse on I/O or syntax errors.
Json read_json_file(const std::string& path);

}  // namespace fairassign
