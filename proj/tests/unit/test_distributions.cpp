#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fairassign/distributions.hpp"
#include "fairassign/error.hpp"
#include "fairassign/random.hpp"

using namespace fairassign;

namespace {

// Truncated-normal mean by composite Simpson integration of x * pdf(x) over
// [lower, mean + 12 sd], normalized by the integral of pdf.
double simpson_truncated_mean(double mu, double sd, double lower) {
  const double hi = std::max(lower, mu) + 12.0 * sd;
  const int n = 200000;
  const double h = (hi - lower) / n;
  auto pdf = [&](double x) { return std::exp(-0.5 * ((x - mu) / sd) * ((x - mu) / sd)); };
  double num = 0.0, den = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double x = lower + k * h;
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    num += w * x * pdf(x);
    den += w * pdf(x);
  }
  return num / den;
}

double empirical_mean(const Distribution& d, int draws, std::uint64_t seed) {
  Rng rng(seed);
  double sum = 0.0;
  for (int k = 0; k < draws; ++k) sum += d.sample(rng);
  return sum / draws;
}

}  // namespace

TEST_SUITE("distributions") {

TEST_CASE("truncated gaussian mean matches quadrature and sampling") {
  struct Case {
    double mu, sd, lower;
  };
  for (Case c : {Case{15, 10, 5}, Case{20, 5, 5}, Case{0, 1, 2}, Case{10, 3, 0}, Case{-5, 2, 0}}) {
    CAPTURE(c.mu);
    CAPTURE(c.lower);
    const Distribution d = make_truncated_gaussian(c.mu, c.sd, c.lower);
    const double quad = simpson_truncated_mean(c.mu, c.sd, c.lower);
    CHECK(d.mean() == doctest::Approx(quad).epsilon(1e-7));
    CHECK(std::abs(empirical_mean(d, 1'000'000, 11) - quad) < 0.05);
  }
}

TEST_CASE("truncated gaussian samples respect the lower bound") {
  Rng rng(3);
  for (const Distribution& d :
       {make_truncated_gaussian(15, 10, 5), make_truncated_gaussian(0, 1, 3), make_truncated_gaussian(5, 0.1, 0)}) {
    for (int k = 0; k < 20000; ++k) CHECK_GE(d.sample(rng), d.gaussian().lower);
  }
}

TEST_CASE("discrete sampling converges to the mean") {
  const Distribution d = make_discrete({{10, 0.5}, {30, 0.5}});
  CHECK(d.mean() == doctest::Approx(20.0));
  CHECK(std::abs(empirical_mean(d, 100000, 5) - 20.0) < 0.2);
}

TEST_CASE("invalid distributions are rejected") {
  auto kind_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kParse;
  };
  CHECK(kind_of([] { make_truncated_gaussian(10, 0, 0); }) == ErrorKind::kInvalidParameter);
  CHECK(kind_of([] { make_truncated_gaussian(10, 1, -1); }) == ErrorKind::kInvalidParameter);
  CHECK(kind_of([] { make_discrete({{10, 0.5}, {20, 0.4}}); }) == ErrorKind::kInvalidParameter);
  CHECK(kind_of([] { make_discrete({{0, 1.0}}); }) == ErrorKind::kInvalidParameter);
  CHECK(kind_of([] { make_discrete({{-3, 1.0}}); }) == ErrorKind::kInvalidParameter);
  CHECK(kind_of([] { make_discrete({}); }) == ErrorKind::kInvalidParameter);
}

TEST_CASE("duplicate atoms merge") {
  const Distribution d = make_discrete({{5, 0.25}, {7, 0.5}, {5, 0.25}});
  REQUIRE(d.discrete().support.size() == 2);
  CHECK(d.discrete().support[0].probability == doctest::Approx(0.5));
}

TEST_CASE("exact expected minimum") {
  const Distribution fourteen = make_point_mass(14);
  const Distribution coin = make_discrete({{10, 0.5}, {30, 0.5}});
  const Distribution fair = make_discrete({{10, 0.5}, {20, 0.5}});
  CHECK(exact_min_expectation(std::vector<Distribution>{fourteen}) == doctest::Approx(14));
  CHECK(exact_min_expectation(std::vector<Distribution>{fourteen, coin}) == doctest::Approx(12));
  CHECK(exact_min_expectation(std::vector<Distribution>{fair}) == doctest::Approx(15));
  // E[min] of two independent fair dice on {1..6}: sum_k P(min >= k) = 91/36.
  std::vector<Atom> die;
  for (int v = 1; v <= 6; ++v) die.push_back({static_cast<double>(v), 1.0 / 6});
  const Distribution d6 = make_discrete(die);
  CHECK(exact_min_expectation(std::vector<Distribution>{d6, d6}) == doctest::Approx(91.0 / 36));
}

TEST_CASE("exact expected minimum enforces the support cap and discreteness") {
  std::vector<Atom> ten;
  for (int v = 1; v <= 10; ++v) ten.push_back({static_cast<double>(v), 0.1});
  const std::vector<Distribution> many(7, make_discrete(ten));
  CHECK_THROWS_AS(exact_min_expectation(many), Error);
  const std::vector<Distribution> few(3, make_discrete(ten));
  CHECK_NOTHROW(exact_min_expectation(few, 1000));
  CHECK_THROWS_AS(exact_min_expectation(few, 999), Error);
  const std::vector<Distribution> gauss{make_truncated_gaussian(5, 1, 0)};
  CHECK_THROWS_AS(exact_min_expectation(gauss), Error);
}

TEST_CASE("empirical distribution reproduces its data") {
  const std::vector<double> values{0.0, 2.0, 2.0, 4.0};
  const Distribution d = make_empirical(values);
  CHECK(d.mean() == doctest::Approx(2.0));
  CHECK(d.discrete().support.size() == 3);
}

TEST_CASE("sample matrix layout and validation") {
  std::vector<double> data(2 * 3 * 4);
  for (std::size_t k = 0; k < data.size(); ++k) data[k] = static_cast<double>(k);
  const SampleMatrix s(4, 3, 2, 9, data);
  CHECK(s.at(1, 2, 0) == data[(0 * 3 + 2) * 4 + 1]);
  CHECK(s.column(1, 1).size() == 4);
  CHECK(s.column(1, 1)[3] == data[(1 * 3 + 1) * 4 + 3]);
  data[5] = -1.0;
  CHECK_THROWS_AS(SampleMatrix(4, 3, 2, 9, data), Error);
  data[5] = std::nan("");
  CHECK_THROWS_AS(SampleMatrix(4, 3, 2, 9, data), Error);
  CHECK_THROWS_AS(SampleMatrix(4, 3, 2, 9, std::vector<double>(5)), Error);
}

TEST_CASE("rng helpers") {
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 3));
  Rng rng(1);
  std::vector<int> hits(5);
  for (int k = 0; k < 50000; ++k) ++hits[rng.below(5)];
  for (int h : hits) CHECK(std::abs(h - 10000) < 3 * std::sqrt(50000 * 0.2 * 0.8));
}

}  // TEST_SUITE
