#include "fairassign/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "fairassign/error.hpp"

namespace fairassign {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename F>
auto parse_guard(const char* what, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kParse, fmt::format("{}: {}", what, e.what()));
  }
}

Range range_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::kParse, "ranges must be [lo, hi]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json range_to_json(const Range& r) { return Json::array({r.lo, r.hi}); }

std::string format_real(double v) {
  if (std::isnan(v)) return "";
  return fmt::format("{:.10g}", v);
}

double alpha_for(const AlphaMode& mode, const CostEvaluator& ev) {
  switch (mode.kind) {
    case AlphaMode::Kind::kEq6: return alpha_bound(ev).value;
    case AlphaMode::Kind::kOne: return 1.0;
    case AlphaMode::Kind::kExplicit: return mode.value;
  }
  return 1.0;
}

}  // namespace

const char* to_string(Policy p) {
  switch (p) {
    case Policy::kFair: return "fair";
    case Policy::kFairAlpha: return "fair-alpha";
    case Policy::kUtilitarian: return "utilitarian";
    case Policy::kRandom: return "random";
    case Policy::kRepeatThreshold: return "repeat-threshold";
    case Policy::kOracle: return "oracle";
  }
  return "?";
}

const char* to_string(InitialPolicy p) {
  return p == InitialPolicy::kBottleneck ? "bottleneck" : "min-sum";
}

std::string to_string(const AlphaMode& a) {
  switch (a.kind) {
    case AlphaMode::Kind::kEq6: return "eq6";
    case AlphaMode::Kind::kOne: return "1";
    case AlphaMode::Kind::kExplicit: return format_real(a.value);
  }
  return "?";
}

Policy parse_policy(const std::string& s) {
  for (Policy p : {Policy::kFair, Policy::kFairAlpha, Policy::kUtilitarian, Policy::kRandom,
                   Policy::kRepeatThreshold, Policy::kOracle}) {
    if (s == to_string(p)) return p;
  }
  throw Error(ErrorKind::kInvalidParameter, fmt::format("unknown policy '{}'", s));
}

InitialPolicy parse_initial(const std::string& s) {
  if (s == "bottleneck") return InitialPolicy::kBottleneck;
  if (s == "min-sum") return InitialPolicy::kMinSum;
  throw Error(ErrorKind::kInvalidParameter, fmt::format("unknown initial policy '{}'", s));
}

AlphaMode parse_alpha(const std::string& s) {
  if (s == "eq6") return {AlphaMode::Kind::kEq6, 1.0};
  if (s == "1" || s == "one") return {AlphaMode::Kind::kOne, 1.0};
  std::size_t used = 0;
  double value = kNaN;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !(value >= 1.0) || !std::isfinite(value)) {
    throw Error(ErrorKind::kInvalidParameter,
                fmt::format("alpha must be 'eq6', '1' or a real >= 1, got '{}'", s));
  }
  return {AlphaMode::Kind::kExplicit, value};
}

int ExperimentConfig::agents() const {
  return generator == GeneratorKind::kBipartite ? bipartite.agents : transport.agents;
}

int ExperimentConfig::tasks() const {
  return generator == GeneratorKind::kBipartite ? bipartite.tasks : transport.tasks;
}

void validate(const ExperimentConfig& c) {
  if (c.trials < 1) throw Error(ErrorKind::kInvalidParameter, "trials must be >= 1");
  if (c.samples < 1) throw Error(ErrorKind::kInvalidParameter, "samples must be >= 1");
  if (c.policies.empty()) throw Error(ErrorKind::kInvalidParameter, "no policies requested");
  if (c.deployments.empty()) throw Error(ErrorKind::kInvalidParameter, "no deployment sizes");
  if (c.tasks() < 1 || c.agents() < c.tasks()) {
    throw Error(ErrorKind::kInfeasibleInstance,
                fmt::format("need N >= M >= 1, got N={} M={}", c.agents(), c.tasks()));
  }
  for (int nd : c.deployments) {
    if (nd < c.tasks() || nd > c.agents()) {
      throw Error(ErrorKind::kInvalidParameter,
                  fmt::format("deployment {} outside [M, N] = [{}, {}]", nd, c.tasks(), c.agents()));
    }
  }
  if (c.threads < 0) throw Error(ErrorKind::kInvalidParameter, "threads must be >= 0");
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig c;
  parse_guard("config", [&] {
    const std::string gen = j.value("generator", std::string("bipartite"));
    if (gen == "bipartite") {
      c.generator = GeneratorKind::kBipartite;
    } else if (gen == "transport") {
      c.generator = GeneratorKind::kTransport;
    } else {
      throw Error(ErrorKind::kParse, fmt::format("unknown generator '{}'", gen));
    }
    if (j.contains("bipartite")) {
      const Json& b = j.at("bipartite");
      c.bipartite.agents = b.value("agents", c.bipartite.agents);
      c.bipartite.tasks = b.value("tasks", c.bipartite.tasks);
      if (b.contains("mean_range")) c.bipartite.mean = range_from_json(b.at("mean_range"));
      if (b.contains("std_range")) c.bipartite.stddev = range_from_json(b.at("std_range"));
      c.bipartite.truncation = b.value("truncation", c.bipartite.truncation);
    }
    if (j.contains("transport")) {
      const Json& t = j.at("transport");
      c.transport.nodes = t.value("nodes", c.transport.nodes);
      c.transport.agents = t.value("agents", c.transport.agents);
      c.transport.tasks = t.value("tasks", c.transport.tasks);
      if (t.contains("edge_mean_range")) c.transport.edge_mean = range_from_json(t.at("edge_mean_range"));
      if (t.contains("edge_std_range")) c.transport.edge_stddev = range_from_json(t.at("edge_std_range"));
      c.transport.extra_edge_density = t.value("extra_edge_density", c.transport.extra_edge_density);
    }
    c.trials = j.value("trials", c.trials);
    c.samples = j.value("samples", c.samples);
    if (j.contains("policies")) {
      c.policies.clear();
      for (const Json& p : j.at("policies")) c.policies.push_back(parse_policy(p.get<std::string>()));
    }
    if (j.contains("deployments")) c.deployments = j.at("deployments").get<std::vector<int>>();
    if (j.contains("alpha")) {
      const Json& a = j.at("alpha");
      c.alpha = a.is_number() ? parse_alpha(format_real(a.get<double>())) : parse_alpha(a.get<std::string>());
    }
    if (j.contains("initial")) c.initial = parse_initial(j.at("initial").get<std::string>());
    c.seed = j.value("seed", c.seed);
    c.oracle_cap = j.value("oracle_cap", c.oracle_cap);
    c.timing = j.value("timing", c.timing);
    c.threads = j.value("threads", c.threads);
    return 0;
  });
  validate(c);
  return c;
}

Json to_json(const ExperimentConfig& c) {
  Json policies = Json::array();
  for (Policy p : c.policies) policies.push_back(to_string(p));
  return {{"generator", c.generator == GeneratorKind::kBipartite ? "bipartite" : "transport"},
          {"bipartite",
           {{"agents", c.bipartite.agents},
            {"tasks", c.bipartite.tasks},
            {"mean_range", range_to_json(c.bipartite.mean)},
            {"std_range", range_to_json(c.bipartite.stddev)},
            {"truncation", c.bipartite.truncation}}},
          {"transport",
           {{"nodes", c.transport.nodes},
            {"agents", c.transport.agents},
            {"tasks", c.transport.tasks},
            {"edge_mean_range", range_to_json(c.transport.edge_mean)},
            {"edge_std_range", range_to_json(c.transport.edge_stddev)},
            {"extra_edge_density", c.transport.extra_edge_density}}},
          {"trials", c.trials},
          {"samples", c.samples},
          {"policies", policies},
          {"deployments", c.deployments},
          {"alpha", to_string(c.alpha)},
          {"initial", to_string(c.initial)},
          {"seed", c.seed},
          {"oracle_cap", c.oracle_cap},
          {"timing", c.timing},
          {"threads", c.threads}};
}

TrialSetup build_trial(const ExperimentConfig& config, int trial) {
  const auto t = static_cast<std::uint64_t>(trial);
  const std::uint64_t instance_seed = derive_seed(config.seed, kInstanceStream, t);
  const std::uint64_t scenario_seed = derive_seed(config.seed, kScenarioStream, t);

  auto finish = [&](ProblemInstance instance, SampleMatrix samples, CostMatrix means) {
    Assignment initial = config.initial == InitialPolicy::kBottleneck
                             ? bottleneck_initial_assignment(means)
                             : min_sum_initial_assignment(means);
    CostEvaluator ev = CostEvaluator::from_samples(std::move(instance), std::move(samples),
                                                   std::move(initial));
    std::vector<double> costs = ev.task_costs(Assignment{});
    return TrialSetup{trial, std::move(ev), std::move(means), std::move(costs)};
  };

  if (config.generator == GeneratorKind::kBipartite) {
    ProblemInstance instance = random_bipartite(config.bipartite, instance_seed);
    SampleMatrix samples = sample_cost_matrix(instance, config.samples, scenario_seed);
    CostMatrix means = mean_cost_matrix(instance);
    return finish(std::move(instance), std::move(samples), std::move(means));
  }
  const TransportNetwork net = random_transport_network(config.transport, instance_seed);
  auto [instance, samples] = network_to_instance(net, config.transport.tasks, config.samples, scenario_seed);
  CostMatrix means = mean_cost_matrix(samples);
  return finish(std::move(instance), std::move(samples), std::move(means));
}

double percent_difference(double value, double reference) {
  return 100.0 * (value - reference) / reference;
}

std::vector<ReportRow> run_trial(const ExperimentConfig& config, int trial) {
  using Clock = std::chrono::steady_clock;
  const TrialSetup setup = build_trial(config, trial);
  const CostEvaluator& ev = setup.evaluator;
  const int m = ev.tasks();
  const double max_before = *std::max_element(setup.initial_costs.begin(), setup.initial_costs.end());
  const double mean_before =
      std::accumulate(setup.initial_costs.begin(), setup.initial_costs.end(), 0.0) / m;

  std::vector<int> rank(static_cast<std::size_t>(m));
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(), [&](int a, int b) {
    return setup.initial_costs[static_cast<std::size_t>(a)] < setup.initial_costs[static_cast<std::size_t>(b)];
  });

  const bool want_oracle =
      std::find(config.policies.begin(), config.policies.end(), Policy::kOracle) != config.policies.end();

  std::vector<ReportRow> rows;
  for (int nd : config.deployments) {
    std::optional<OracleResult> oracle;
    double oracle_ms = 0.0;
    bool oracle_skipped = false;
    if (want_oracle) {
      const auto start = Clock::now();
      try {
        oracle = brute_force_optimal(ev, nd, config.oracle_cap);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kTooLarge) throw;
        oracle_skipped = true;
      }
      oracle_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    }

    for (Policy policy : config.policies) {
      ReportRow row;
      row.trial = trial;
      row.policy = policy;
      row.deployment = nd;
      row.alpha = kNaN;
      row.max_before = max_before;
      row.mean_before = mean_before;
      row.oracle_skipped = oracle_skipped;

      const auto start = Clock::now();
      Assignment chosen;
      switch (policy) {
        case Policy::kFair:
        case Policy::kFairAlpha: {
          const double alpha = policy == Policy::kFair ? 1.0 : alpha_for(config.alpha, ev);
          SolveResult r = solve_fair(ev, nd, alpha);
          row.alpha = alpha;
          row.iterations = r.iterations;
          chosen = std::move(r.assignment);
          break;
        }
        case Policy::kUtilitarian:
          chosen = utilitarian_redundant(ev, nd);
          break;
        case Policy::kRandom:
          chosen = random_redundant(ev.agents(), m, ev.initial(), nd,
                                    derive_seed(derive_seed(config.seed, kPolicyStream,
                                                            static_cast<std::uint64_t>(trial)),
                                                0, static_cast<std::uint64_t>(nd)));
          break;
        case Policy::kRepeatThreshold:
          chosen = repeated_threshold(setup.mean_costs, ev.initial(), nd);
          break;
        case Policy::kOracle:
          if (oracle) chosen = oracle->assignment;
          break;
      }
      double elapsed = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      if (policy == Policy::kOracle) elapsed = oracle_ms;
      if (policy == Policy::kOracle && !oracle) {
        // Skipped oracle: report the initial assignment's costs.
        chosen = Assignment{};
      }

      const std::vector<double> after = ev.task_costs(chosen);
      row.redundant = static_cast<int>(chosen.size());
      row.deployment_used = row.redundant + m;
      row.max_after = *std::max_element(after.begin(), after.end());
      row.mean_after = std::accumulate(after.begin(), after.end(), 0.0) / m;
      row.pct_max_initial = percent_difference(row.max_after, row.max_before);
      row.pct_mean_initial = percent_difference(row.mean_after, row.mean_before);
      if (oracle) {
        row.oracle_max = oracle->max_cost;
        row.pct_max_oracle = percent_difference(row.max_after, oracle->max_cost);
      }
      row.worst_improved = row.max_after < row.max_before - kCostTolerance;
      for (int j = 0; j < m; ++j) {
        const bool improved = after[static_cast<std::size_t>(j)] <
                              setup.initial_costs[static_cast<std::size_t>(j)] - kCostTolerance;
        row.improved_tasks.push_back(improved ? '1' : '0');
      }
      for (int j : rank) row.improved_by_rank.push_back(row.improved_tasks[static_cast<std::size_t>(j)]);
      row.wall_ms = config.timing ? elapsed : 0.0;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<ReportRow> run_experiment(const ExperimentConfig& config) {
  validate(config);
  std::vector<std::vector<ReportRow>> per_trial(static_cast<std::size_t>(config.trials));
  int workers = config.threads == 0 ? static_cast<int>(std::thread::hardware_concurrency()) : config.threads;
  workers = std::clamp(workers, 1, config.trials);

  if (workers == 1) {
    for (int t = 0; t < config.trials; ++t) per_trial[static_cast<std::size_t>(t)] = run_trial(config, t);
  } else {
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(config.trials));
    {
      std::vector<std::jthread> pool;
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (int t = next++; t < config.trials; t = next++) {
            try {
              per_trial[static_cast<std::size_t>(t)] = run_trial(config, t);
            } catch (...) {
              failures[static_cast<std::size_t>(t)] = std::current_exception();
            }
          }
        });
      }
    }
    for (const auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  }

  std::vector<ReportRow> rows;
  for (auto& chunk : per_trial) {
    rows.insert(rows.end(), std::make_move_iterator(chunk.begin()), std::make_move_iterator(chunk.end()));
  }
  return rows;
}

void write_rows_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "# " << kReportFormatVersion << '\n';
  out << "trial,policy,nd,alpha,redundant,deployment_used,iterations,max_before,max_after,"
         "mean_before,mean_after,pct_max_initial,pct_mean_initial,oracle_max,pct_max_oracle,"
         "oracle_skipped,worst_improved,improved_tasks,improved_by_rank,wall_ms\n";
  for (const ReportRow& r : rows) {
    fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.trial,
               to_string(r.policy), r.deployment, format_real(r.alpha), r.redundant,
               r.deployment_used, r.iterations, format_real(r.max_before),
               format_real(r.max_after), format_real(r.mean_before), format_real(r.mean_after),
               format_real(r.pct_max_initial), format_real(r.pct_mean_initial),
               format_real(r.oracle_max.value_or(kNaN)), format_real(r.pct_max_oracle.value_or(kNaN)),
               r.oracle_skipped ? 1 : 0, r.worst_improved ? 1 : 0, r.improved_tasks,
               r.improved_by_rank, format_real(r.wall_ms));
  }
}

Json rows_to_json(const std::vector<ReportRow>& rows) {
  auto opt = [](double v) { return std::isnan(v) ? Json(nullptr) : Json(v); };
  Json out = Json::array();
  for (const ReportRow& r : rows) {
    out.push_back({{"trial", r.trial},
                   {"policy", to_string(r.policy)},
                   {"nd", r.deployment},
                   {"alpha", opt(r.alpha)},
                   {"redundant", r.redundant},
                   {"deployment_used", r.deployment_used},
                   {"iterations", r.iterations},
                   {"max_before", r.max_before},
                   {"max_after", r.max_after},
                   {"mean_before", r.mean_before},
                   {"mean_after", r.mean_after},
                   {"pct_max_initial", r.pct_max_initial},
                   {"pct_mean_initial", r.pct_mean_initial},
                   {"oracle_max", opt(r.oracle_max.value_or(kNaN))},
                   {"pct_max_oracle", opt(r.pct_max_oracle.value_or(kNaN))},
                   {"oracle_skipped", r.oracle_skipped},
                   {"worst_improved", r.worst_improved},
                   {"improved_tasks", r.improved_tasks},
                   {"improved_by_rank", r.improved_by_rank},
                   {"wall_ms", r.wall_ms}});
  }
  return out;
}

Quartiles quartiles(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorKind::kInvalidParameter, "quartiles of an empty sample");
  std::sort(values.begin(), values.end());
  auto at = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
  };
  return {at(0.25), at(0.5), at(0.75)};
}

std::vector<SummaryRow> summarize(const std::vector<ReportRow>& rows) {
  if (rows.empty()) throw Error(ErrorKind::kInvalidParameter, "nothing to summarize");
  std::vector<std::pair<Policy, int>> keys;
  std::map<std::pair<Policy, int>, std::vector<const ReportRow*>> groups;
  for (const ReportRow& r : rows) {
    const auto key = std::make_pair(r.policy, r.deployment);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) keys.push_back(key);
    it->second.push_back(&r);
  }

  std::vector<SummaryRow> out;
  for (const auto& key : keys) {
    const auto& group = groups.at(key);
    SummaryRow s;
    s.policy = key.first;
    s.deployment = key.second;
    s.count = static_cast<int>(group.size());
    std::vector<double> pmax, pmean, poracle, used, alphas;
    int improved = 0, at_oracle = 0, within10 = 0;
    std::vector<double> by_rank;
    for (const ReportRow* r : group) {
      pmax.push_back(r->pct_max_initial);
      pmean.push_back(r->pct_mean_initial);
      used.push_back(r->deployment_used);
      if (!std::isnan(r->alpha)) alphas.push_back(r->alpha);
      if (r->worst_improved) ++improved;
      if (r->oracle_max) {
        poracle.push_back(*r->pct_max_oracle);
        if (r->max_after <= *r->oracle_max + kCostTolerance) ++at_oracle;
        if (r->max_after <= 1.1 * *r->oracle_max + kCostTolerance) ++within10;
      }
      by_rank.resize(std::max(by_rank.size(), r->improved_by_rank.size()), 0.0);
      for (std::size_t k = 0; k < r->improved_by_rank.size(); ++k) {
        if (r->improved_by_rank[k] == '1') by_rank[k] += 1.0;
      }
    }
    s.pct_max_initial = quartiles(pmax);
    s.pct_mean_initial = quartiles(pmean);
    s.worst_improved_fraction = static_cast<double>(improved) / s.count;
    if (!poracle.empty()) {
      s.pct_max_oracle = quartiles(poracle);
      s.at_oracle_fraction = static_cast<double>(at_oracle) / static_cast<double>(poracle.size());
      s.within_10pct_fraction = static_cast<double>(within10) / static_cast<double>(poracle.size());
    }
    s.median_deployment_used = quartiles(used).median;
    if (!alphas.empty()) {
      s.alpha_min = *std::min_element(alphas.begin(), alphas.end());
      s.alpha_max = *std::max_element(alphas.begin(), alphas.end());
    } else {
      s.alpha_min = s.alpha_max = kNaN;
    }
    for (double& f : by_rank) f /= s.count;
    s.improved_by_rank_fraction = std::move(by_rank);
    out.push_back(std::move(s));
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary) {
  out << "# " << kReportFormatVersion << " summary\n";
  out << "policy,nd,count,pct_max_initial_q1,pct_max_initial_median,pct_max_initial_q3,"
         "pct_mean_initial_q1,pct_mean_initial_median,pct_mean_initial_q3,"
         "pct_max_oracle_q1,pct_max_oracle_median,pct_max_oracle_q3,worst_improved_fraction,"
         "at_oracle_fraction,within_10pct_fraction,median_deployment_used,alpha_min,alpha_max\n";
  for (const SummaryRow& s : summary) {
    const Quartiles none{kNaN, kNaN, kNaN};
    const Quartiles& o = s.pct_max_oracle ? *s.pct_max_oracle : none;
    fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", to_string(s.policy),
               s.deployment, s.count, format_real(s.pct_max_initial.q1),
               format_real(s.pct_max_initial.median), format_real(s.pct_max_initial.q3),
               format_real(s.pct_mean_initial.q1), format_real(s.pct_mean_initial.median),
               format_real(s.pct_mean_initial.q3), format_real(o.q1), format_real(o.median),
               format_real(o.q3), format_real(s.worst_improved_fraction),
               format_real(s.at_oracle_fraction.value_or(kNaN)),
               format_real(s.within_10pct_fraction.value_or(kNaN)),
               format_real(s.median_deployment_used), format_real(s.alpha_min),
               format_real(s.alpha_max));
  }
}

Json summary_to_json(const std::vector<SummaryRow>& summary) {
  auto q = [](const Quartiles& x) { return Json{{"q1", x.q1}, {"median", x.median}, {"q3", x.q3}}; };
  auto opt = [](double v) { return std::isnan(v) ? Json(nullptr) : Json(v); };
  Json out = Json::array();
  for (const SummaryRow& s : summary) {
    out.push_back({{"policy", to_string(s.policy)},
                   {"nd", s.deployment},
                   {"count", s.count},
                   {"pct_max_initial", q(s.pct_max_initial)},
                   {"pct_mean_initial", q(s.pct_mean_initial)},
                   {"pct_max_oracle", s.pct_max_oracle ? q(*s.pct_max_oracle) : Json(nullptr)},
                   {"worst_improved_fraction", s.worst_improved_fraction},
                   {"at_oracle_fraction", opt(s.at_oracle_fraction.value_or(kNaN))},
                   {"within_10pct_fraction", opt(s.within_10pct_fraction.value_or(kNaN))},
                   {"median_deployment_used", s.median_deployment_used},
                   {"alpha_min", opt(s.alpha_min)},
                   {"alpha_max", opt(s.alpha_max)},
                   {"improved_by_rank_fraction", s.improved_by_rank_fraction}});
  }
  return out;
}

}  // namespace fairassign
