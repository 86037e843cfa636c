#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "fairassign/bench.hpp"
#include "fairassign/error.hpp"

using namespace fairassign;

namespace {

ExperimentConfig small_config() {
  return config_from_json(Json::parse(R"({
    "generator": "bipartite",
    "bipartite": {"agents": 7, "tasks": 2},
    "trials": 4,
    "samples": 40,
    "policies": ["fair", "fair-alpha", "utilitarian", "random", "repeat-threshold", "oracle"],
    "deployments": [3, 4],
    "seed": 11
  })"));
}

std::string csv_of(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  write_rows_csv(out, rows);
  return out.str();
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("percent difference and quartiles") {
  CHECK(percent_difference(8, 10) == doctest::Approx(-20));
  CHECK(percent_difference(10, 10) == 0);
  const Quartiles q = quartiles({4, 1, 3, 2, 5});
  CHECK(q.q1 == 2);
  CHECK(q.median == 3);
  CHECK(q.q3 == 4);
  CHECK(quartiles({1, 2}).median == doctest::Approx(1.5));
  CHECK_THROWS_AS(quartiles({}), Error);
}

TEST_CASE("config parsing and validation") {
  const ExperimentConfig c = small_config();
  CHECK(c.agents() == 7);
  CHECK(c.policies.size() == 6);
  CHECK(to_string(c.alpha) == "eq6");
  const ExperimentConfig d = config_from_json(to_json(c));
  CHECK(to_json(d) == to_json(c));
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"deployments": [30]})")), Error);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"deployments": [2], "trials": 0})")), Error);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"deployments": [2], "policies": ["best"]})")), Error);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"deployments": [2], "alpha": 0.5})")), Error);
  CHECK(config_from_json(Json::parse(R"({"deployments": [2], "alpha": 2.5})")).alpha.value == 2.5);
}

TEST_CASE("experiment rows are complete and ordered") {
  const ExperimentConfig c = small_config();
  const auto rows = run_experiment(c);
  REQUIRE(rows.size() == 4 * 2 * 6);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const ReportRow& r = rows[k];
    CHECK(r.trial == static_cast<int>(k / 12));
    CHECK(r.deployment == (k % 12 < 6 ? 3 : 4));
    CHECK(r.policy == c.policies[k % 6]);
    CHECK(r.max_after <= r.max_before + kCostTolerance);
    CHECK(r.mean_after <= r.mean_before + kCostTolerance);
    CHECK(r.improved_tasks.size() == 2);
    REQUIRE(r.oracle_max.has_value());
    if (r.policy == Policy::kFairAlpha) {
      CHECK(r.max_after <= *r.oracle_max + kCostTolerance * 10);
    } else {
      CHECK(r.deployment_used <= r.deployment);
      CHECK(r.max_after >= *r.oracle_max - kCostTolerance);
    }
    CHECK(std::isnan(r.alpha) == (r.policy != Policy::kFair && r.policy != Policy::kFairAlpha));
  }
}

TEST_CASE("reports are reproducible and independent of thread count") {
  ExperimentConfig c = small_config();
  const std::string one = csv_of(run_experiment(c));
  CHECK(one == csv_of(run_experiment(c)));
  c.threads = 3;
  CHECK(one == csv_of(run_experiment(c)));
  CHECK(one.rfind("# fairassign-report v1\n", 0) == 0);
}

TEST_CASE("trials depend only on the master seed and trial id") {
  ExperimentConfig c = small_config();
  const auto full = run_experiment(c);
  const auto third = run_trial(c, 2);
  CHECK(csv_of(third) == csv_of(std::vector<ReportRow>(full.begin() + 24, full.begin() + 36)));
}

TEST_CASE("summary of identical rows") {
  ReportRow r;
  r.policy = Policy::kFair;
  r.deployment = 5;
  r.alpha = 1.0;
  r.pct_max_initial = -10;
  r.pct_mean_initial = -5;
  r.oracle_max = 9.0;
  r.max_after = 9.0;
  r.pct_max_oracle = 0.0;
  r.worst_improved = true;
  r.deployment_used = 5;
  r.improved_by_rank = "01";
  const auto summary = summarize(std::vector<ReportRow>(5, r));
  REQUIRE(summary.size() == 1);
  const SummaryRow& s = summary.front();
  CHECK(s.count == 5);
  CHECK(s.pct_max_initial.q1 == -10);
  CHECK(s.pct_max_initial.q3 == -10);
  CHECK(s.worst_improved_fraction == 1);
  CHECK(*s.at_oracle_fraction == 1);
  CHECK(*s.within_10pct_fraction == 1);
  CHECK(s.median_deployment_used == 5);
  CHECK(s.improved_by_rank_fraction == std::vector<double>{0, 1});
  CHECK_THROWS_AS(summarize({}), Error);
}

TEST_CASE("transport trials run") {
  const ExperimentConfig c = config_from_json(Json::parse(R"({
    "generator": "transport",
    "transport": {"nodes": 15, "agents": 6, "tasks": 3},
    "trials": 2, "samples": 20, "initial": "min-sum",
    "policies": ["fair", "utilitarian"], "deployments": [5], "seed": 3
  })"));
  const auto rows = run_experiment(c);
  CHECK(rows.size() == 4);
  for (const ReportRow& r : rows) CHECK(r.redundant <= 2);
}

}  // TEST_SUITE
