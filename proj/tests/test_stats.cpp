#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "viralens/errors.hpp"
#include "viralens/stats.hpp"

using namespace viralens;

TEST_SUITE("stats") {

TEST_CASE("K-S statistic edge cases") {
  std::vector<double> a = {1, 2, 2, 3};
  KsResult same = ks_two_sample(a, a);
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == 1.0);

  std::vector<double> low = {1, 2, 3};
  std::vector<double> high = {10, 11};
  CHECK(ks_two_sample(low, high).statistic == 1.0);

  std::vector<double> empty;
  CHECK_THROWS_AS(ks_two_sample(empty, a), ConfigError);
}

TEST_CASE("K-S statistic equals the brute-force ECDF sup exactly") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(1 + rng() % 50), b(1 + rng() % 50);
    for (double& v : a) v = std::floor(unif(rng) * 20.0) / 10.0; // force ties
    for (double& v : b) v = std::floor(unif(rng) * 20.0) / 10.0;
    KsResult r = ks_two_sample(a, b);
    CHECK(r.statistic == oracles::bruteforce_ks(a, b));
    KsResult swapped = ks_two_sample(b, a);
    CHECK(swapped.statistic == r.statistic);
    CHECK(swapped.p_value == r.p_value);
  }
}

TEST_CASE("K-S statistic is invariant under monotone transforms") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> norm(0, 2);
  std::vector<double> a(40), b(60);
  for (double& v : a) v = norm(rng);
  for (double& v : b) v = norm(rng) + 0.5;
  double d = ks_two_sample(a, b).statistic;
  auto transform = [](double x) { return std::exp(x / 3.0); };
  for (double& v : a) v = transform(v);
  for (double& v : b) v = transform(v);
  CHECK(ks_two_sample(a, b).statistic == d);
}

TEST_CASE("Kolmogorov survival function") {
  CHECK(kolmogorov_survival(0.0) == 1.0);
  CHECK(kolmogorov_survival(10.0) < 1e-12);
  double prev = 1.0;
  for (double lambda = 0.3; lambda < 3.0; lambda += 0.1) {
    double q = kolmogorov_survival(lambda);
    CHECK(q <= prev);
    prev = q;
  }
  // Known reference point: Q(1) ~ 0.26999967...
  CHECK(kolmogorov_survival(1.0) == doctest::Approx(0.26999967).epsilon(1e-6));
}

TEST_CASE("t test edge cases") {
  std::vector<double> a = {1, 2, 3, 4};
  auto same = t_two_sample(a, a);
  REQUIRE(same.has_value());
  CHECK(same->t == 0.0);
  CHECK(same->p_value == 1.0);

  // Zero variance on both sides: undefined marker instead of +/-inf.
  std::vector<double> zeros = {0, 0};
  std::vector<double> ones = {1, 1};
  CHECK_FALSE(t_two_sample(zeros, ones, TTestVariant::Pooled).has_value());
  CHECK_FALSE(t_two_sample(zeros, zeros, TTestVariant::Welch).has_value());

  std::vector<double> one = {1.0};
  CHECK_THROWS_AS(t_two_sample(one, a), ConfigError);
}

TEST_CASE("t statistic negates when samples swap") {
  std::vector<double> a = {1, 2, 3, 5, 8};
  std::vector<double> b = {2, 2, 4, 4};
  auto ab = t_two_sample(a, b);
  auto ba = t_two_sample(b, a);
  REQUIRE(ab.has_value());
  REQUIRE(ba.has_value());
  CHECK(ab->t == -ba->t);
  CHECK(ab->p_value == ba->p_value);
}

TEST_CASE("t test matches the quadrature oracle") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> norm(0, 1);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<double> a(30), b(30);
    for (double& v : a) v = norm(rng);
    for (double& v : b) v = norm(rng) + 0.2;
    for (auto variant : {TTestVariant::Welch, TTestVariant::Pooled}) {
      auto res = t_two_sample(a, b, variant);
      REQUIRE(res.has_value());
      double oracle_p = 2.0 * (1.0 - oracles::t_cdf_quadrature(std::abs(res->t), res->df));
      CHECK(std::abs(res->p_value - oracle_p) < 1e-8);
      CHECK(std::abs(students_t_cdf(res->t, res->df) -
                     oracles::t_cdf_quadrature(res->t, res->df)) < 1e-10);
    }
  }
}

TEST_CASE("ccdf points") {
  std::vector<double> sample = {1, 1, 2};
  auto points = ccdf_points(sample);
  REQUIRE(points.size() == 2);
  CHECK(points[0] == std::pair<double, double>{1.0, 1.0});
  CHECK(points[1].first == 2.0);
  CHECK(points[1].second == doctest::Approx(1.0 / 3.0));

  auto single = ccdf_points(std::vector<double>{5});
  REQUIRE(single.size() == 1);
  CHECK(single[0] == std::pair<double, double>{5.0, 1.0});

  std::mt19937_64 rng(3);
  std::vector<double> random(50);
  for (double& v : random) v = static_cast<double>(rng() % 12);
  auto pts = ccdf_points(random);
  CHECK(pts.front().second == 1.0);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    CHECK(pts[i].first > pts[i - 1].first);
    CHECK(pts[i].second <= pts[i - 1].second);
  }

  std::vector<double> empty;
  CHECK_THROWS_AS(ccdf_points(empty), ConfigError);
}

TEST_CASE("motivation debiasing") {
  auto flat = debias_motivations(3, 3, 3, 3);
  for (double v : flat) CHECK(v == 0.0);

  auto graded = debias_motivations(1, 2, 3, 4);
  CHECK(graded[0] == -1.5);
  CHECK(graded[1] == -0.5);
  CHECK(graded[2] == 0.5);
  CHECK(graded[3] == 1.5);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unif(1.0, 4.0);
  for (int trial = 0; trial < 100; ++trial) {
    auto d = debias_motivations(unif(rng), unif(rng), unif(rng), unif(rng));
    CHECK(std::abs(d[0] + d[1] + d[2] + d[3]) < 1e-12);
  }
}

} // TEST_SUITE
