#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "atgraph/distributions.hpp"
#include "atgraph/rng.hpp"
#include "atgraph/stats.hpp"

using namespace atgraph;

TEST_CASE("gamma(1) mean") {
  rng r(1);
  double s = 0.0;
  const std::int64_t m = 1000000;
  for (std::int64_t i = 0; i < m; ++i) s += r.gamma(1.0);
  CHECK(s / static_cast<double>(m) == doctest::Approx(1.0).epsilon(0.005));
}

TEST_CASE("beta mean matches the stick marginal") {
  // a = 1 - alpha, b = t_2 - 1 - alpha with alpha = 0.5, t_2 = 3.
  rng r(2);
  double s = 0.0;
  const std::int64_t m = 400000;
  for (std::int64_t i = 0; i < m; ++i) s += r.beta(0.5, 1.5);
  CHECK(s / static_cast<double>(m) == doctest::Approx(0.25).epsilon(0.01));
}

TEST_CASE("zolotarev function is increasing with the analytic minimum") {
  for (double sigma : {0.2, 0.5, 2.0 / 3.0, 0.9}) {
    const double lmin = log_zolotarev_a_min(sigma);
    double prev = -1e300;
    for (int i = 1; i <= 2000; ++i) {
      const double u = std::numbers::pi * static_cast<double>(i) / 2001.0;
      const double la = log_zolotarev_a(u, sigma);
      CHECK(la >= prev - 1e-9);
      CHECK(la >= lmin - 1e-9);
      prev = la;
    }
    CHECK(log_zolotarev_a(1e-8, sigma) == doctest::Approx(lmin).epsilon(1e-4));
  }
}

TEST_CASE("positive stable laplace transform") {
  rng r(3);
  const std::int64_t m = 1000000;
  for (double sigma : {0.5, 2.0 / 3.0}) {
    double s1 = 0.0, s2 = 0.0;
    for (std::int64_t i = 0; i < m; ++i) {
      const double z = sample_positive_stable(sigma, r);
      s1 += std::exp(-z);
      s2 += std::exp(-2.5 * z);
    }
    CHECK(s1 / static_cast<double>(m) ==
          doctest::Approx(std::exp(-1.0)).epsilon(0.005));
    CHECK(s2 / static_cast<double>(m) ==
          doctest::Approx(std::exp(-std::pow(2.5, sigma))).epsilon(0.01));
  }
}

TEST_CASE("half-stable sampler matches the inverse-gamma closed form") {
  rng r(4);
  const std::int64_t m = 100000;
  std::vector<double> xs(static_cast<std::size_t>(m)), ys(static_cast<std::size_t>(m));
  for (auto& v : xs) v = sample_positive_stable(0.5, r);
  for (auto& v : ys) v = 1.0 / (4.0 * r.gamma(0.5));
  CHECK(ks_two_sample(xs, ys).p_value > 0.01);
}

TEST_CASE("plain mittag-leffler moments against two independent routes") {
  rng r(5);
  const std::int64_t m = 1000000;
  double s2 = 0.0;
  for (std::int64_t i = 0; i < m; ++i) {
    const double v = sample_ml(0.5, r);
    s2 += v * v;
  }
  const double m2 = s2 / static_cast<double>(m);
  CHECK(m2 == doctest::Approx(ml_moment(0.5, 0.0, 2.0)).epsilon(0.01));
  // Independent oracle: the negative sigma-power of a separately sampled
  // stable variable.
  double o2 = 0.0;
  for (std::int64_t i = 0; i < m; ++i) {
    const double v = std::pow(sample_positive_stable(0.5, r), -0.5);
    o2 += v * v;
  }
  CHECK(m2 == doctest::Approx(o2 / static_cast<double>(m)).epsilon(0.01));
}

TEST_CASE("tilted sampler matches the half-sigma closed form") {
  // ML(1/2, theta) equals 2 sqrt(Gamma(theta + 1/2)).
  rng r(6);
  const std::int64_t m = 100000;
  for (double theta : {0.5, 1.0, 2.5}) {
    std::vector<double> xs(static_cast<std::size_t>(m)), ys(static_cast<std::size_t>(m));
    for (auto& v : xs) v = sample_ml_tilted_exact(0.5, theta, r);
    for (auto& v : ys) v = 2.0 * std::sqrt(r.gamma(theta + 0.5));
    CHECK(ks_two_sample(xs, ys).p_value > 0.01);
  }
}

TEST_CASE("tilted sampler moments at general parameters") {
  rng r(7);
  const std::int64_t m = 400000;
  const double sigma = 2.0 / 3.0, theta = 4.0 / 3.0;
  double s1 = 0.0, s2 = 0.0;
  for (std::int64_t i = 0; i < m; ++i) {
    const double v = sample_ml_tilted_exact(sigma, theta, r);
    s1 += v;
    s2 += v * v;
  }
  CHECK(s1 / static_cast<double>(m) ==
        doctest::Approx(ml_moment(sigma, theta, 1.0)).epsilon(0.005));
  CHECK(s2 / static_cast<double>(m) ==
        doctest::Approx(ml_moment(sigma, theta, 2.0)).epsilon(0.01));
  CHECK_THROWS_AS(sample_ml_tilted_exact(0.5, -0.2, r), bad_params);
}

TEST_CASE("crp block-count route approximates the tilted law") {
  rng r(8);
  const std::int64_t m = 3000;
  std::vector<double> xs(static_cast<std::size_t>(m)), ys(static_cast<std::size_t>(m));
  for (auto& v : xs) v = sample_ml_crp_approx(0.5, 1.0, 100000, r);
  for (auto& v : ys) v = sample_ml_tilted_exact(0.5, 1.0, r);
  CHECK(ks_two_sample(xs, ys).p_value > 0.001);
}

TEST_CASE("dist_spec composition") {
  rng r(9);
  auto spec = dist_spec::make_scaled(
      dist_spec::make_product({dist_spec::make_gga(2.0, 0.5),
                               dist_spec::make_beta(1.0, 1.0)}),
      3.0);
  CHECK_FALSE(spec.approximate());
  auto xs = sample_dist(spec, 400000, r);
  double s = 0.0;
  for (double v : xs) s += v;
  // E[3 G_2^{1/2} B_{1,1}] = 3 * Gamma(2.5)/Gamma(2) * 1/2.
  const double want = 3.0 * std::exp(log_gamma(2.5) - log_gamma(2.0)) * 0.5;
  CHECK(s / static_cast<double>(xs.size()) == doctest::Approx(want).epsilon(0.01));

  auto approx = dist_spec::make_product(
      {dist_spec::make_ml_theta(0.5, 1.0), dist_spec::make_gamma(1.0)});
  CHECK(approx.approximate());
  CHECK(approx.describe().find("approx") != std::string::npos);
  auto exact = dist_spec::make_ml_theta(0.5, 1.0, true);
  CHECK_FALSE(exact.approximate());
}
