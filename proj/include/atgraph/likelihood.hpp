#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "special.hpp"

namespace atgraph {

/// Natural-log probability; -inf with a diagnostic marks an impossible input.
struct log_prob {
  double value = 0.0;
  std::string diagnostic;

  bool impossible() const { return value == neg_infinity; }

  static log_prob impossible_because(std::string why) {
    return log_prob{neg_infinity, std::move(why)};
  }
};

namespace detail {

inline double delta1(std::int64_t j) { return j == 1 ? 1.0 : 0.0; }

// Common product over vertices of the exact-probability formula, with the
// per-vertex counts supplied by the caller.
inline double log_prob_product(double alpha, const std::vector<step_t>& times,
                               const std::vector<std::int64_t>& counts,
                               std::int64_t n) {
  const auto k = static_cast<std::int64_t>(times.size());
  double lp = -log_gamma(static_cast<double>(n) - alpha * static_cast<double>(k));
  const double lg1a = log_gamma(1.0 - alpha);
  for (std::int64_t j = 1; j <= k; ++j) {
    const double tj = static_cast<double>(times[static_cast<std::size_t>(j - 1)]);
    const double cj = static_cast<double>(counts[static_cast<std::size_t>(j - 1)]);
    lp += log_gamma(tj - alpha * static_cast<double>(j));
    lp += log_gamma(cj - alpha);
    lp -= log_gamma(tj - 1.0 - alpha * static_cast<double>(j - 1) + delta1(j));
    lp -= lg1a;
  }
  return lp;
}

}  // namespace detail

/// Closed-form log probability of observing the given ends under the
/// degree-biased law with the given schedule. Returns -inf with a diagnostic
/// when the labels contradict the schedule.
inline log_prob log_prob_labels(const model_params& params,
                                const arrival_schedule& schedule,
                                const label_sequence& labels) {
  const auto n = static_cast<std::int64_t>(labels.size());
  if (n == 0) return log_prob{0.0, ""};
  const multigraph_view view = multigraph_from_labels(labels);
  for (label_t k = 1; k <= view.num_vertices; ++k) {
    const step_t expected = schedule.time(k);
    const step_t actual = view.arrival_times[static_cast<std::size_t>(k - 1)];
    if (expected != actual)
      return log_prob::impossible_because(
          "vertex " + std::to_string(k) + " arrives at " + std::to_string(actual) +
          " but the schedule says " +
          (expected == infinite_time ? std::string("inf") : std::to_string(expected)));
  }
  if (schedule.time(view.num_vertices + 1) <= n)
    return log_prob::impossible_because(
        "schedule expects vertex " + std::to_string(view.num_vertices + 1) +
        " by step " + std::to_string(schedule.time(view.num_vertices + 1)));
  return log_prob{
      detail::log_prob_product(params.alpha, view.arrival_times, view.degrees, n),
      ""};
}

/// Same probability as the telescoped product of one-step conditionals; the
/// second algebraic route, kept for cross-checking the closed form.
inline log_prob log_prob_labels_sequential(const model_params& params,
                                           const arrival_schedule& schedule,
                                           const label_sequence& labels) {
  const auto n = static_cast<std::int64_t>(labels.size());
  std::vector<std::int64_t> deg;
  double lp = 0.0;
  label_t k = 0;
  for (step_t i = 1; i <= n; ++i) {
    const label_t l = labels[static_cast<std::size_t>(i - 1)];
    if (i == schedule.time(k + 1)) {
      if (l != k + 1)
        return log_prob::impossible_because(
            "expected a new vertex at step " + std::to_string(i));
      ++k;
      deg.push_back(1);
    } else {
      if (l > k)
        return log_prob::impossible_because(
            "new vertex at step " + std::to_string(i) + " is not scheduled");
      const double num =
          static_cast<double>(deg[static_cast<std::size_t>(l - 1)]) - params.alpha;
      const double den = static_cast<double>(i - 1) -
                         params.alpha * static_cast<double>(k);
      lp += std::log(num / den);
      ++deg[static_cast<std::size_t>(l - 1)];
    }
  }
  return log_prob{lp, ""};
}

/// Conditional partition probability given block sizes and arrival times
/// (the record indices). Identical formula to the label-sequence case.
inline log_prob log_prob_partition(const model_params& params,
                                   const std::vector<step_t>& arrival_times,
                                   const std::vector<std::int64_t>& block_sizes) {
  const auto k = static_cast<std::int64_t>(block_sizes.size());
  if (k == 0 || static_cast<std::int64_t>(arrival_times.size()) != k)
    throw inconsistent_input("need one arrival time per block");
  std::int64_t n = 0;
  for (std::int64_t j = 0; j < k; ++j) {
    if (block_sizes[static_cast<std::size_t>(j)] < 1)
      throw inconsistent_input("block sizes must be >= 1");
    n += block_sizes[static_cast<std::size_t>(j)];
  }
  if (arrival_times[0] != 1) throw inconsistent_input("first arrival time must be 1");
  std::int64_t capacity = 0;
  for (std::int64_t j = 0; j < k; ++j) {
    if (j > 0 && arrival_times[static_cast<std::size_t>(j)] <=
                     arrival_times[static_cast<std::size_t>(j - 1)])
      throw inconsistent_input("arrival times must be strictly increasing");
    // Elements before the j-th arrival all sit in earlier blocks.
    if (arrival_times[static_cast<std::size_t>(j)] - 1 > capacity)
      throw inconsistent_input("arrival time " + std::to_string(j + 1) +
                               " exceeds what earlier blocks can hold");
    capacity += block_sizes[static_cast<std::size_t>(j)];
  }
  if (arrival_times.back() > n)
    throw inconsistent_input("last arrival time exceeds n");
  return log_prob{detail::log_prob_product(params.alpha, arrival_times,
                                           block_sizes, n),
                  ""};
}

/// log of the Gibbs-like coefficient V^{alpha,T}_{n,k}.
inline double log_v_alpha_t(std::int64_t n, std::int64_t k,
                            const model_params& params,
                            const std::vector<step_t>& arrival_times) {
  if (k < 1 || static_cast<std::int64_t>(arrival_times.size()) < k)
    throw inconsistent_input("need k arrival times");
  if (arrival_times[static_cast<std::size_t>(k - 1)] > n)
    throw inconsistent_input("T_k must not exceed n");
  double lv = -log_gamma(static_cast<double>(n) -
                         params.alpha * static_cast<double>(k));
  for (std::int64_t j = 1; j <= k; ++j) {
    const double tj = static_cast<double>(arrival_times[static_cast<std::size_t>(j - 1)]);
    lv += log_gamma(tj - params.alpha * static_cast<double>(j));
    lv -= log_gamma(tj - 1.0 - params.alpha * static_cast<double>(j - 1) +
                    detail::delta1(j));
  }
  return lv;
}

inline double v_alpha_t(std::int64_t n, std::int64_t k, const model_params& params,
                        const std::vector<step_t>& arrival_times) {
  return std::exp(log_v_alpha_t(n, k, params, arrival_times));
}

/// log pmf of the next-arrival law of a two-parameter CRP:
/// P[T_{k+1} = T_k + t | T_k].
inline double crp_arrival_log_pmf(double alpha, double theta, step_t t_k,
                                  std::int64_t k, std::int64_t t) {
  if (!(alpha >= 0.0 && alpha < 1.0) || !(theta > -alpha))
    throw bad_params("crp parameters out of range");
  if (t < 1 || k < 1 || t_k < k) throw bad_params("crp pmf arguments out of range");
  const double ak = alpha * static_cast<double>(k);
  const double tk = static_cast<double>(t_k);
  const double td = static_cast<double>(t);
  return std::log(theta + ak) + log_gamma(theta + tk) +
         log_gamma(tk + td - 1.0 - ak) - log_gamma(theta + tk + td) -
         log_gamma(tk - ak);
}

/// log P[T_{k+1} > n | T_k = t_k] under the same law.
inline double crp_no_arrival_log_survival(double alpha, double theta, step_t t_k,
                                          std::int64_t k, std::int64_t n) {
  if (n < t_k) throw bad_params("survival horizon before T_k");
  const double ak = alpha * static_cast<double>(k);
  return log_gamma(static_cast<double>(n) - ak) -
         log_gamma(static_cast<double>(t_k) - ak) +
         log_gamma(theta + static_cast<double>(t_k)) -
         log_gamma(theta + static_cast<double>(n));
}

/// Gibbs coefficient of the arrival-marginalized partition law. For every
/// arrival vector T_1 < ... < T_k <= n < T_{k+1} the product
/// P[arrivals exactly T by step n] * V^{alpha,T}_{n,k} takes the same value;
/// that common value is V_{n,k} of the product-form EPPF, and the
/// t-independence is exactly what makes the marginalized partition
/// exchangeable. Enumerates all vectors (hence the cap), verifies the
/// t-independence, and returns the probability-weighted mean.
inline double gibbs_v_marginal(std::int64_t n, std::int64_t k,
                               const model_params& params, double theta,
                               std::int64_t enumeration_cap = 12) {
  if (n > enumeration_cap)
    throw cap_exceeded("gibbs_v_marginal: n exceeds the enumeration cap");
  if (k < 1 || k > n) throw inconsistent_input("need 1 <= k <= n");
  const double alpha = params.alpha;
  if (!(alpha >= 0.0 && alpha < 1.0) || !(theta > -alpha))
    throw bad_params("crp parameters out of range");

  std::vector<step_t> times(static_cast<std::size_t>(k));
  times[0] = 1;
  double weighted = 0.0;
  double weight_total = 0.0;
  double lo = 0.0, hi = 0.0;
  bool first = true;
  // Depth-first over strictly increasing arrival vectors.
  std::function<void(std::int64_t, double)> descend =
      [&](std::int64_t j, double log_weight) {
        if (j == k) {
          log_weight += crp_no_arrival_log_survival(alpha, theta,
                                                    times[static_cast<std::size_t>(k - 1)],
                                                    k, n);
          const double value =
              std::exp(log_weight + log_v_alpha_t(n, k, params, times));
          const double w = std::exp(log_weight);
          weighted += w * value;
          weight_total += w;
          lo = first ? value : std::min(lo, value);
          hi = first ? value : std::max(hi, value);
          first = false;
          return;
        }
        for (step_t t = times[static_cast<std::size_t>(j - 1)] + 1; t <= n - (k - j - 1);
             ++t) {
          times[static_cast<std::size_t>(j)] = t;
          descend(j + 1,
                  log_weight +
                      crp_arrival_log_pmf(alpha, theta,
                                          times[static_cast<std::size_t>(j - 1)], j,
                                          t - times[static_cast<std::size_t>(j - 1)]));
        }
      };
  descend(1, 0.0);
  if (hi / lo - 1.0 > 1e-9)
    throw inconsistent_input(
        "arrival law does not marginalize to an exchangeable partition");
  return weighted / weight_total;
}

/// EPPF of the marginalized partition in Gibbs product form.
inline double eppf_crp_marginal(const std::vector<std::int64_t>& block_sizes,
                                const model_params& params, double theta,
                                std::int64_t enumeration_cap = 12) {
  std::int64_t n = 0;
  for (std::int64_t s : block_sizes) {
    if (s < 1) throw inconsistent_input("block sizes must be >= 1");
    n += s;
  }
  const auto k = static_cast<std::int64_t>(block_sizes.size());
  double lg = 0.0;
  for (std::int64_t s : block_sizes)
    lg += log_gamma(static_cast<double>(s) - params.alpha) -
          log_gamma(1.0 - params.alpha);
  return gibbs_v_marginal(n, k, params, theta, enumeration_cap) * std::exp(lg);
}

/// Visits every label sequence of length n_ends that is consistent with the
/// schedule. Intended for small outcome spaces (full enumeration).
inline void enumerate_label_sequences(
    const arrival_schedule& schedule, std::int64_t n_ends,
    const std::function<void(const label_sequence&)>& visit) {
  std::vector<label_t> work(static_cast<std::size_t>(n_ends));
  std::function<void(std::int64_t, label_t)> descend = [&](std::int64_t n,
                                                           label_t k) {
    if (n > n_ends) {
      visit(label_sequence::trusted_from_labels(work));
      return;
    }
    if (n == schedule.time(k + 1)) {
      work[static_cast<std::size_t>(n - 1)] = k + 1;
      descend(n + 1, k + 1);
      return;
    }
    for (label_t v = 1; v <= k; ++v) {
      work[static_cast<std::size_t>(n - 1)] = v;
      descend(n + 1, k);
    }
  };
  descend(1, 0);
}

}  // namespace atgraph
