// fairassign: instance generation, fair redundant assignment, baselines and
// the experiment harness.
//
//   fairassign generate  --generator bipartite|transport [params] --out FILE
//   fairassign solve     INSTANCE --policy P --alpha eq6|1|X --nd K --out FILE
//   fairassign oracle    INSTANCE --nd K --out FILE
//   fairassign benchmark CONFIG --out PREFIX
//
// Exit codes: 0 success, 2 invalid input, 3 infeasible instance, 4 oracle
// (or exact-enumeration) cap exceeded.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairassign/baselines.hpp"
#include "fairassign/bench.hpp"
#include "fairassign/error.hpp"
#include "fairassign/fsra.hpp"
#include "fairassign/json_io.hpp"
#include "fairassign/netgen.hpp"

namespace fa = fairassign;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitCap = 4;

int exit_code(const fa::Error& e) {
  switch (e.kind()) {
    case fa::ErrorKind::kInfeasibleInstance: return kExitInfeasible;
    case fa::ErrorKind::kTooLarge: return kExitCap;
    default: return kExitInvalid;
  }
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fa::Error(fa::ErrorKind::kInvalidParameter, "cannot write '" + path + "'");
  out << text;
}

struct ProblemOptions {
  std::string input;
  int deployment = 0;
  int samples = fa::kDefaultScenarios;
  std::uint64_t seed = 0;
  std::string initial = "bottleneck";
  bool exact = false;
  bool integer_costs = false;
};

void add_problem_options(CLI::App* cmd, ProblemOptions& o) {
  cmd->add_option("instance", o.input, "Instance or network JSON")->required();
  cmd->add_option("--nd", o.deployment, "Deployment size N_d (default: the file's value, else M)");
  cmd->add_option("--samples", o.samples, "Scenario count S")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Scenario sampling seed");
  cmd->add_option("--initial", o.initial, "Initial assignment: bottleneck | min-sum");
  cmd->add_flag("--exact", o.exact, "Exact enumeration backend (discrete edges only)");
  cmd->add_flag("--integer-costs", o.integer_costs, "Round task costs up to integers");
}

struct LoadedProblem {
  fa::CostEvaluator evaluator;
  fa::CostMatrix mean_costs;
  int deployment;
};

LoadedProblem load_problem(const ProblemOptions& o) {
  const fa::Json doc = fa::read_json_file(o.input);
  const fa::InitialPolicy initial_policy = fa::parse_initial(o.initial);
  fa::EvaluatorOptions eval_opts;
  eval_opts.integer_costs = o.integer_costs;

  auto initial_for = [&](const fa::CostMatrix& means) {
    return initial_policy == fa::InitialPolicy::kBottleneck ? fa::bottleneck_initial_assignment(means)
                                                            : fa::min_sum_initial_assignment(means);
  };

  if (doc.contains("nodes")) {
    if (o.exact) {
      throw fa::Error(fa::ErrorKind::kInvalidParameter,
                      "--exact is not available for networks (path costs are correlated)");
    }
    const fa::TransportNetwork net = fa::network_from_json(doc);
    const int m = static_cast<int>(net.task_nodes.size());
    const int nd = o.deployment > 0 ? o.deployment : m;
    auto [instance, samples] = fa::network_to_instance(net, nd, o.samples, o.seed);
    fa::CostMatrix means = fa::mean_cost_matrix(samples);
    fa::Assignment initial = initial_for(means);
    return {fa::CostEvaluator::from_samples(std::move(instance), std::move(samples),
                                            std::move(initial), eval_opts),
            std::move(means), nd};
  }

  fa::ProblemInstance instance = fa::instance_from_json(doc);
  if (o.deployment > 0) instance = instance.with_deployment(o.deployment);
  const int nd = instance.deployment();
  fa::CostMatrix means = fa::mean_cost_matrix(instance);
  fa::Assignment initial = initial_for(means);
  if (o.exact) {
    return {fa::CostEvaluator::exact(std::move(instance), std::move(initial), eval_opts),
            std::move(means), nd};
  }
  fa::SampleMatrix samples = fa::sample_cost_matrix(instance, o.samples, o.seed);
  return {fa::CostEvaluator::from_samples(std::move(instance), std::move(samples),
                                          std::move(initial), eval_opts),
          std::move(means), nd};
}

fa::Json cost_summary(const fa::CostEvaluator& ev, const fa::Assignment& redundant,
                      const std::string& suffix) {
  const auto costs = ev.task_costs(redundant);
  double total = 0.0;
  for (double c : costs) total += c;
  return {{"task_costs_" + suffix, costs},
          {"max_cost_" + suffix, *std::max_element(costs.begin(), costs.end())},
          {"mean_cost_" + suffix, total / static_cast<double>(costs.size())}};
}

int run_solve(const ProblemOptions& o, const std::string& policy_name, const std::string& alpha_text,
              const std::string& out_path) {
  const auto start = std::chrono::steady_clock::now();
  const fa::Policy policy = fa::parse_policy(policy_name);
  const fa::AlphaMode alpha_mode = fa::parse_alpha(alpha_text);
  LoadedProblem p = load_problem(o);
  const fa::CostEvaluator& ev = p.evaluator;

  fa::Json out;
  fa::Assignment chosen;
  switch (policy) {
    case fa::Policy::kFair:
    case fa::Policy::kFairAlpha: {
      double alpha = 1.0;
      std::vector<std::string> notes;
      if (policy == fa::Policy::kFairAlpha) {
        if (alpha_mode.kind == fa::AlphaMode::Kind::kEq6) {
          const fa::AlphaBound bound = fa::alpha_bound(ev);
          alpha = bound.value;
          if (bound.clamped) notes.push_back("max_j J_j(empty) < 2: alpha clamped to 1");
        } else {
          alpha = alpha_mode.kind == fa::AlphaMode::Kind::kOne ? 1.0 : alpha_mode.value;
        }
      }
      fa::SolveResult r = fa::solve_fair(ev, p.deployment, alpha);
      r.warnings.insert(r.warnings.begin(), notes.begin(), notes.end());
      out = fa::to_json(r);
      chosen = r.assignment;
      break;
    }
    case fa::Policy::kUtilitarian:
      chosen = fa::utilitarian_redundant(ev, p.deployment);
      break;
    case fa::Policy::kRandom:
      chosen = fa::random_redundant(ev.agents(), ev.tasks(), ev.initial(), p.deployment,
                                    fa::derive_seed(o.seed, fa::kPolicyStream, 0));
      break;
    case fa::Policy::kRepeatThreshold:
      chosen = fa::repeated_threshold(p.mean_costs, ev.initial(), p.deployment);
      break;
    case fa::Policy::kOracle: {
      fa::OracleResult r = fa::brute_force_optimal(ev, p.deployment);
      out = fa::to_json(r);
      chosen = r.assignment;
      break;
    }
  }
  if (!out.contains("assignment")) out["assignment"] = fa::to_json(chosen);
  out["deployment_used"] = static_cast<int>(chosen.size()) + ev.tasks();
  out["policy"] = fa::to_string(policy);
  out["deployment"] = p.deployment;
  out["initial"] = fa::to_json(ev.initial());
  out.update(cost_summary(ev, fa::Assignment{}, "before"));
  out.update(cost_summary(ev, chosen, "after"));
  out["wall_time_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  emit(out_path, out.dump(2) + "\n");
  return kExitOk;
}

int run_oracle(const ProblemOptions& o, double cap, const std::string& out_path) {
  LoadedProblem p = load_problem(o);
  const fa::OracleResult r = fa::brute_force_optimal(p.evaluator, p.deployment, cap);
  fa::Json out = fa::to_json(r);
  out["deployment"] = p.deployment;
  out["initial"] = fa::to_json(p.evaluator.initial());
  emit(out_path, out.dump(2) + "\n");
  return kExitOk;
}

int run_benchmark(const std::string& config_path, const std::string& prefix) {
  const fa::ExperimentConfig config = fa::config_from_json(fa::read_json_file(config_path));
  const auto rows = fa::run_experiment(config);
  std::ostringstream csv;
  fa::write_rows_csv(csv, rows);
  if (prefix.empty() || prefix == "-") {
    std::cout << csv.str();
    return kExitOk;
  }
  const auto summary = fa::summarize(rows);
  std::ostringstream summary_csv;
  fa::write_summary_csv(summary_csv, summary);
  emit(prefix + ".csv", csv.str());
  emit(prefix + ".json", fa::Json{{"config", fa::to_json(config)}, {"rows", fa::rows_to_json(rows)}}.dump(2) + "\n");
  emit(prefix + "_summary.csv", summary_csv.str());
  emit(prefix + "_summary.json", fa::summary_to_json(summary).dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fair redundant multi-agent task assignment"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Emit a random instance (bipartite) or network (transport) as JSON");
  std::string generator = "bipartite";
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  fa::BipartiteParams bp;
  fa::TransportParams tp;
  std::vector<double> mean_range, std_range;
  int gen_agents = 0, gen_tasks = 0, gen_nd = 0;
  gen->add_option("--generator", generator, "bipartite | transport")
      ->check(CLI::IsMember({"bipartite", "transport"}));
  gen->add_option("--agents", gen_agents, "Agent count N");
  gen->add_option("--tasks", gen_tasks, "Task count M");
  gen->add_option("--nd", gen_nd, "Deployment size stored in the instance");
  gen->add_option("--nodes", tp.nodes, "Network node count (transport)");
  gen->add_option("--density", tp.extra_edge_density, "Extra-edge probability (transport)");
  gen->add_option("--mean-range", mean_range, "Mean range lo hi")->expected(2);
  gen->add_option("--std-range", std_range, "Stddev range lo hi")->expected(2);
  gen->add_option("--truncation", bp.truncation, "Lower truncation point (bipartite)");
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "Run one policy on an instance");
  ProblemOptions solve_opts;
  std::string policy = "fair-alpha";
  std::string alpha = "eq6";
  std::string solve_out;
  add_problem_options(solve, solve_opts);
  solve->add_option("--policy", policy, "fair | fair-alpha | utilitarian | random | repeat-threshold | oracle");
  solve->add_option("--alpha", alpha, "Relaxation for fair-alpha: eq6 | 1 | <real >= 1>");
  solve->add_option("--out", solve_out, "Output file (default stdout)");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Brute-force optimal redundant assignment");
  ProblemOptions oracle_opts;
  double cap = fa::kDefaultOracleCap;
  std::string oracle_out;
  add_problem_options(oracle, oracle_opts);
  oracle->add_option("--cap", cap, "Maximum number of sets to enumerate");
  oracle->add_option("--out", oracle_out, "Output file (default stdout)");

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "Run an experiment config");
  std::string config_path;
  std::string bench_out;
  bench->add_option("config", config_path, "Experiment config JSON")->required();
  bench->add_option("--out", bench_out,
                    "Output prefix: writes PREFIX.csv, PREFIX.json, PREFIX_summary.{csv,json}; "
                    "default prints the CSV to stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*gen) {
      if (generator == "bipartite") {
        if (gen_agents > 0) bp.agents = gen_agents;
        if (gen_tasks > 0) bp.tasks = gen_tasks;
        bp.deployment = gen_nd;
        if (mean_range.size() == 2) bp.mean = {mean_range[0], mean_range[1]};
        if (std_range.size() == 2) bp.stddev = {std_range[0], std_range[1]};
        emit(gen_out, fa::to_json(fa::random_bipartite(bp, gen_seed)).dump(2) + "\n");
      } else {
        if (gen_agents > 0) tp.agents = gen_agents;
        if (gen_tasks > 0) tp.tasks = gen_tasks;
        if (mean_range.size() == 2) tp.edge_mean = {mean_range[0], mean_range[1]};
        if (std_range.size() == 2) tp.edge_stddev = {std_range[0], std_range[1]};
        emit(gen_out, fa::to_json(fa::random_transport_network(tp, gen_seed)).dump(2) + "\n");
      }
      return kExitOk;
    }
    if (*solve) return run_solve(solve_opts, policy, alpha, solve_out);
    if (*oracle) return run_oracle(oracle_opts, cap, oracle_out);
    if (*bench) return run_benchmark(config_path, bench_out);
  } catch (const fa::Error& e) {
    std::cerr << "fairassign: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "fairassign: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
