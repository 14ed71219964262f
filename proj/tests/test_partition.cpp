#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "atgraph/arrivals.hpp"
#include "atgraph/likelihood.hpp"
#include "atgraph/partition.hpp"
#include "atgraph/rng.hpp"
#include "atgraph/stats.hpp"

using namespace atgraph;

TEST_CASE("the graph map is the identity on block labels") {
  auto p = partition::from_blocks({{1, 2}, {3}});
  CHECK(phi(p).labels() == std::vector<label_t>{1, 1, 2});
  CHECK(phi_inverse(phi(p)) == p);
}

TEST_CASE("round trips on random partitions") {
  rng r(12);
  for (int rep = 0; rep < 1000; ++rep) {
    auto sched = iid_schedule(interarrival_spec::custom({0.6, 0.4}), 6, r);
    auto p = urn_scheme(model_params(0.2), sched, 10, r);
    CHECK(phi_inverse(phi(p)) == p);
    CHECK(partition::from_blocks(p.blocks()) == p);
  }
}

TEST_CASE("record indices") {
  auto p = phi_inverse(label_sequence::from_labels({1, 1, 2, 1}));
  CHECK(record_indices(p) == std::vector<step_t>{1, 3});
  CHECK(record_indices(phi_inverse(label_sequence::from_labels({1, 1}))) ==
        std::vector<step_t>{1});
  rng r(13);
  for (int rep = 0; rep < 200; ++rep) {
    auto sched = iid_schedule(interarrival_spec::geometric(0.5), 8, r);
    auto p = urn_scheme(model_params(0.0), sched, 12, r);
    auto rec = record_indices(p);
    for (std::size_t i = 1; i < rec.size(); ++i) CHECK(rec[i] > rec[i - 1]);
    // Record indices are the graph's arrival times.
    auto view = multigraph_from_labels(phi(p));
    CHECK(rec == view.arrival_times);
  }
}

TEST_CASE("urn scheme matches the exact law on a small outcome space") {
  rng r(14);
  auto sched = validate_schedule({1, 2, 4});
  const model_params params(0.5);
  std::map<std::vector<label_t>, std::int64_t> counts;
  const std::int64_t m = 100000;
  for (std::int64_t i = 0; i < m; ++i)
    ++counts[urn_scheme(params, sched, 5, r).labels().labels()];
  std::vector<std::int64_t> observed;
  std::vector<double> pmf;
  enumerate_label_sequences(sched, 5, [&](const label_sequence& ls) {
    observed.push_back(counts[ls.labels()]);
    pmf.push_back(std::exp(log_prob_labels(params, sched, ls).value));
  });
  CHECK(chi_square_gof(observed, pmf).p_value > 0.001);
}

TEST_CASE("coherence of the marginalized partition law") {
  const double alpha = 0.5, theta = 1.0;
  const model_params params(alpha);
  auto prob_fn = [&](const partition& p) {
    return eppf_crp_marginal(p.block_sizes(), params, theta);
  };
  SUBCASE("n = 2 is exact by construction") {
    auto res = check_coherence(prob_fn, 2);
    CHECK(res.max_violation < 1e-14);
  }
  SUBCASE("n = 5") {
    auto res = check_coherence(prob_fn, 5);
    CHECK(res.max_violation < 1e-10);
    CHECK(res.partitions_checked == 15);  // Bell(4)
  }
  SUBCASE("cap") {
    CHECK_THROWS_AS(check_coherence(prob_fn, 11), cap_exceeded);
  }
}

TEST_CASE("coherence of the fixed-schedule conditional law") {
  const model_params params(0.3);
  auto sched = validate_schedule({1, 3, 4, 8});
  // Probability of a finite partition under a fixed schedule: zero unless its
  // record indices are exactly the realized arrivals so far.
  auto prob_fn = [&](const partition& p) {
    const auto n = static_cast<std::int64_t>(p.size());
    const auto times = record_indices(p);
    const auto k = static_cast<std::int64_t>(times.size());
    for (std::int64_t j = 0; j < k; ++j)
      if (times[static_cast<std::size_t>(j)] != sched.time(j + 1)) return 0.0;
    if (sched.time(k + 1) <= n) return 0.0;
    const auto lp = log_prob_partition(params, times, p.block_sizes());
    return std::exp(lp.value);
  };
  for (std::int64_t n : {2, 3, 5, 6}) {
    auto res = check_coherence(prob_fn, n);
    CHECK(res.max_violation < 1e-10);
  }
}

TEST_CASE("exchangeability spot check by element permutation") {
  // Swapping elements of a small partition does not change the marginalized
  // probability (only the block-size multiset matters).
  const model_params params(0.5);
  auto p1 = partition::from_blocks({{1, 2, 5}, {3}, {4, 6}});
  auto p2 = partition::from_blocks({{1, 6}, {2, 3, 4}, {5}});
  CHECK(eppf_crp_marginal(p1.block_sizes(), params, 1.0) ==
        doctest::Approx(eppf_crp_marginal(p2.block_sizes(), params, 1.0))
            .epsilon(1e-12));
}
