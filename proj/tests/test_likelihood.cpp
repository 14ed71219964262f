#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "atgraph/arrivals.hpp"
#include "atgraph/likelihood.hpp"
#include "atgraph/partition.hpp"
#include "atgraph/rng.hpp"
#include "atgraph/samplers.hpp"

using namespace atgraph;

namespace {

// Closed-form coefficients of the two-parameter CRP, the independent oracle
// for the arrival-marginalization pipeline.
double crp_v_closed_form(std::int64_t n, std::int64_t k, double alpha,
                         double theta) {
  double v = std::exp(log_gamma(theta + 1.0) -
                      log_gamma(theta + static_cast<double>(n)));
  for (std::int64_t i = 1; i < k; ++i)
    v *= theta + alpha * static_cast<double>(i);
  return v;
}

double crp_eppf_closed_form(const std::vector<std::int64_t>& sizes, double alpha,
                            double theta) {
  std::int64_t n = 0;
  for (auto s : sizes) n += s;
  double p = crp_v_closed_form(n, static_cast<std::int64_t>(sizes.size()), alpha, theta);
  for (auto s : sizes)
    p *= std::exp(log_gamma(static_cast<double>(s) - alpha) - log_gamma(1.0 - alpha));
  return p;
}

}  // namespace

TEST_CASE("forced sequences have probability one") {
  SUBCASE("two fresh vertices") {
    auto lp = log_prob_labels(model_params(0.7), validate_schedule({1, 2}),
                              label_sequence::from_labels({1, 2}));
    CHECK(lp.value == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("single vertex, two ends") {
    auto lp = log_prob_labels(model_params(-0.3), validate_schedule({1}),
                              label_sequence::from_labels({1, 1}));
    CHECK(lp.value == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("hand-enumerated four-end probability") {
  const model_params params(0.0);
  auto sched = validate_schedule({1, 2});
  auto lp = log_prob_labels(params, sched, label_sequence::from_labels({1, 2, 1, 1}));
  CHECK(std::exp(lp.value) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  double total = 0.0;
  enumerate_label_sequences(sched, 4, [&](const label_sequence& ls) {
    total += std::exp(log_prob_labels(params, sched, ls).value);
  });
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("labels inconsistent with the schedule get minus infinity") {
  auto lp = log_prob_labels(model_params(0.0), validate_schedule({1, 2}),
                            label_sequence::from_labels({1, 1}));
  CHECK(lp.impossible());
  CHECK_FALSE(lp.diagnostic.empty());
  auto lp2 = log_prob_labels(model_params(0.0), validate_schedule({1}),
                             label_sequence::from_labels({1, 2}));
  CHECK(lp2.impossible());
}

TEST_CASE("completeness and route agreement across alphas and schedules") {
  const std::vector<double> alphas{-1.0, 0.0, 0.5};
  const std::vector<std::vector<step_t>> schedules{
      {1, 2, 4}, {1, 3, 5}, {1, 2}, {1, 2, 3, 7}};
  for (double a : alphas) {
    const model_params params(a);
    for (const auto& times : schedules) {
      auto sched = validate_schedule(times);
      const std::int64_t n = 8;
      double total = 0.0;
      double worst_gap = 0.0;
      enumerate_label_sequences(sched, n, [&](const label_sequence& ls) {
        const double closed = log_prob_labels(params, sched, ls).value;
        const double sequential = log_prob_labels_sequential(params, sched, ls).value;
        worst_gap = std::max(worst_gap, std::fabs(closed - sequential));
        total += std::exp(closed);
      });
      CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(worst_gap < 1e-12);
    }
  }
}

TEST_CASE("partition probability examples") {
  SUBCASE("two elements, one block") {
    auto lp = log_prob_partition(model_params(0.25), {1}, {2});
    CHECK(lp.value == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("hand evaluation at alpha 0.5") {
    auto lp = log_prob_partition(model_params(0.5), {1, 2}, {2, 2});
    CHECK(std::exp(lp.value) == doctest::Approx(0.125).epsilon(1e-12));
  }
  SUBCASE("structurally impossible inputs throw") {
    CHECK_THROWS_AS(log_prob_partition(model_params(0.0), {1, 4}, {2, 1}),
                    inconsistent_input);
    CHECK_THROWS_AS(log_prob_partition(model_params(0.0), {2, 3}, {2, 1}),
                    inconsistent_input);
  }
}

TEST_CASE("partition route equals label route on random instances") {
  rng r(31);
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const double alpha = -1.0 + 1.9 * r.uniform();
    const model_params params(alpha);
    std::vector<std::int64_t> base;
    for (int j = 0; j < 6; ++j) base.push_back(r.geometric1(0.6));
    auto sched = iid_schedule(interarrival_spec::custom({0.4, 0.3, 0.3}), 7, r);
    auto out = sample_db(params, sched, 14, r);
    auto view = multigraph_from_labels(out.labels);
    const double via_labels = log_prob_labels(params, sched, out.labels).value;
    const double via_partition =
        log_prob_partition(params, view.arrival_times, view.degrees).value;
    worst = std::max(worst, std::fabs(via_labels - via_partition));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("gibbs coefficient factorization") {
  SUBCASE("n=1 value is one") {
    CHECK(v_alpha_t(1, 1, model_params(0.5), {1}) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("conditional probability factorizes through V") {
    rng r(32);
    double worst = 0.0;
    for (int rep = 0; rep < 300; ++rep) {
      const double alpha = -0.8 + 1.7 * r.uniform();
      const model_params params(alpha);
      auto sched = iid_schedule(interarrival_spec::custom({0.5, 0.25, 0.25}), 5, r);
      auto out = sample_db(params, sched, 11, r);
      auto view = multigraph_from_labels(out.labels);
      const auto k = static_cast<std::int64_t>(view.num_vertices);
      double rhs = log_v_alpha_t(11, k, params, view.arrival_times);
      for (auto d : view.degrees)
        rhs += log_gamma(static_cast<double>(d) - alpha) - log_gamma(1.0 - alpha);
      const double lhs =
          log_prob_partition(params, view.arrival_times, view.degrees).value;
      worst = std::max(worst, std::fabs(lhs - rhs));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("marginal gibbs coefficients match the closed form") {
  const model_params params(0.3);
  const double theta = 1.0;
  CHECK(gibbs_v_marginal(1, 1, params, theta) == doctest::Approx(1.0).epsilon(1e-12));
  double worst = 0.0;
  for (std::int64_t n = 1; n <= 8; ++n)
    for (std::int64_t k = 1; k <= n; ++k) {
      const double got = gibbs_v_marginal(n, k, params, theta);
      const double want = crp_v_closed_form(n, k, 0.3, theta);
      worst = std::max(worst, std::fabs(got / want - 1.0));
    }
  CHECK(worst < 1e-10);
  CHECK_THROWS_AS(gibbs_v_marginal(20, 3, params, theta), cap_exceeded);
}

TEST_CASE("marginal coefficients satisfy the forward recursion") {
  const model_params params(0.3);
  const double theta = 1.0;
  double worst = 0.0;
  for (std::int64_t n = 1; n <= 8; ++n)
    for (std::int64_t k = 1; k <= n; ++k) {
      const double v = gibbs_v_marginal(n, k, params, theta);
      const double forward =
          (static_cast<double>(n) - 0.3 * static_cast<double>(k)) *
              gibbs_v_marginal(n + 1, k, params, theta) +
          gibbs_v_marginal(n + 1, k + 1, params, theta);
      worst = std::max(worst, std::fabs(forward / v - 1.0));
    }
  CHECK(worst < 1e-10);
}

TEST_CASE("marginalized eppf is exchangeable and matches the CRP") {
  const double alpha = 0.5, theta = 1.0;
  const model_params params(alpha);
  for (std::int64_t n = 2; n <= 6; ++n) {
    // Direct probability of each set partition: arrival weights times the
    // conditional partition probability.
    std::map<std::vector<std::int64_t>, std::vector<double>> by_shape;
    double total = 0.0;
    enumerate_partitions(n, [&](const partition& p) {
      const auto times = record_indices(p);
      const auto sizes = p.block_sizes();
      const auto k = static_cast<std::int64_t>(sizes.size());
      double lw = 0.0;
      for (std::int64_t i = 1; i < k; ++i)
        lw += crp_arrival_log_pmf(alpha, theta, times[static_cast<std::size_t>(i - 1)], i,
                                  times[static_cast<std::size_t>(i)] -
                                      times[static_cast<std::size_t>(i - 1)]);
      lw += crp_no_arrival_log_survival(alpha, theta,
                                        times[static_cast<std::size_t>(k - 1)], k, n);
      const double prob =
          std::exp(lw + log_prob_partition(params, times, sizes).value);
      total += prob;
      std::vector<std::int64_t> shape = sizes;
      std::sort(shape.begin(), shape.end());
      by_shape[shape].push_back(prob);
      // Gibbs product form with the marginalized coefficient.
      const double gibbs = eppf_crp_marginal(sizes, params, theta);
      CHECK(prob == doctest::Approx(gibbs).epsilon(1e-12));
      // Known two-parameter CRP formula.
      CHECK(prob == doctest::Approx(crp_eppf_closed_form(sizes, alpha, theta))
                        .epsilon(1e-12));
    });
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    for (const auto& [shape, probs] : by_shape) {
      const double lo = *std::min_element(probs.begin(), probs.end());
      const double hi = *std::max_element(probs.begin(), probs.end());
      CHECK(hi / lo - 1.0 < 1e-12);
    }
  }
}
