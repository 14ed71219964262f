#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "rng.hpp"

namespace atgraph {

/// Law of a single interarrival on {1, 2, ...}.
///
/// geometric(beta) has mean 1/beta; shifted_poisson(lambda) is 1 + Poisson
/// with mean 1 + lambda. Both conventions matter for the limit laws
/// downstream, so they are fixed here and documented in the README.
struct interarrival_spec {
  enum class kind_t { constant, geometric, shifted_poisson, custom };

  kind_t kind = kind_t::constant;
  double param = 1.0;           // c, beta, or lambda
  std::vector<double> pmf;      // custom: pmf[i] = P[delta = i + 1]

  static interarrival_spec constant(std::int64_t c) {
    if (c < 1) throw bad_params("constant interarrival must be >= 1");
    interarrival_spec s;
    s.kind = kind_t::constant;
    s.param = static_cast<double>(c);
    return s;
  }

  static interarrival_spec geometric(double beta) {
    if (!(beta > 0.0 && beta <= 1.0))
      throw bad_params("geometric beta must be in (0,1]");
    interarrival_spec s;
    s.kind = kind_t::geometric;
    s.param = beta;
    return s;
  }

  static interarrival_spec shifted_poisson(double lambda) {
    if (!(lambda > 0.0)) throw bad_params("shifted_poisson lambda must be > 0");
    interarrival_spec s;
    s.kind = kind_t::shifted_poisson;
    s.param = lambda;
    return s;
  }

  static interarrival_spec custom(std::vector<double> table) {
    if (table.empty()) throw bad_params("custom pmf is empty");
    double sum = 0.0;
    for (double p : table) {
      if (p < 0.0) throw bad_params("custom pmf has a negative entry");
      sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
      throw bad_params("custom pmf must sum to 1 within 1e-12");
    interarrival_spec s;
    s.kind = kind_t::custom;
    s.pmf = std::move(table);
    return s;
  }

  double mean() const {
    switch (kind) {
      case kind_t::constant: return param;
      case kind_t::geometric: return 1.0 / param;
      case kind_t::shifted_poisson: return 1.0 + param;
      case kind_t::custom: {
        double m = 0.0;
        for (std::size_t i = 0; i < pmf.size(); ++i)
          m += static_cast<double>(i + 1) * pmf[i];
        return m;
      }
    }
    return 0.0;
  }

  std::int64_t sample(rng& r) const {
    switch (kind) {
      case kind_t::constant:
        return static_cast<std::int64_t>(param);
      case kind_t::geometric:
        return r.geometric1(param);
      case kind_t::shifted_poisson:
        return 1 + r.poisson(param);
      case kind_t::custom: {
        double u = r.uniform();
        for (std::size_t i = 0; i < pmf.size(); ++i) {
          u -= pmf[i];
          if (u < 0.0) return static_cast<std::int64_t>(i + 1);
        }
        return static_cast<std::int64_t>(pmf.size());
      }
    }
    throw bad_params("unknown interarrival kind");
  }
};

/// t_j = 2d(j-1) + 1 for j <= k_max; the constant-interarrival scheme with
/// interarrival 2d.
inline arrival_schedule constant_schedule(std::int64_t d, std::int64_t k_max) {
  if (d < 1 || k_max < 1) throw bad_params("constant_schedule: d, k_max >= 1");
  std::vector<step_t> t(static_cast<std::size_t>(k_max));
  for (std::int64_t j = 0; j < k_max; ++j) t[static_cast<std::size_t>(j)] = 2 * d * j + 1;
  return arrival_schedule::from_times(std::move(t),
                                      "constant(" + std::to_string(d) + ")");
}

/// T_1 = 1, then k_max - 1 i.i.d. interarrivals from the spec.
inline arrival_schedule iid_schedule(const interarrival_spec& spec,
                                     std::int64_t k_max, rng& r) {
  if (k_max < 1) throw bad_params("iid_schedule: k_max >= 1");
  std::vector<step_t> t;
  t.reserve(static_cast<std::size_t>(k_max));
  t.push_back(1);
  for (std::int64_t k = 2; k <= k_max; ++k) t.push_back(t.back() + spec.sample(r));
  return arrival_schedule::from_times(std::move(t), "iid");
}

/// Arrival times of a two-parameter CRP, realized by sequential thinning:
/// after n steps with k vertices, step n+1 starts a new vertex with
/// probability (theta + alpha k) / (theta + n). Times beyond n_max are
/// infinite.
inline arrival_schedule crp_schedule(double alpha, double theta,
                                     std::int64_t n_max, rng& r) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw bad_params("crp alpha in [0,1)");
  if (!(theta > -alpha)) throw bad_params("crp theta must exceed -alpha");
  if (n_max < 1) throw bad_params("crp_schedule: n_max >= 1");
  std::vector<step_t> t{1};
  double k = 1.0;
  for (step_t n = 1; n < n_max; ++n) {
    if (r.uniform() < (theta + alpha * k) / (theta + static_cast<double>(n))) {
      t.push_back(n + 1);
      k += 1.0;
    }
  }
  return arrival_schedule::from_times(
      std::move(t),
      "crp(" + std::to_string(alpha) + "," + std::to_string(theta) + ")");
}

/// CRP thinning continued until k_target vertices have arrived; the horizon
/// adapts to the realized (random) growth multiplier.
inline arrival_schedule crp_schedule_until(double alpha, double theta,
                                           std::int64_t k_target, rng& r,
                                           std::int64_t step_cap = 4000000000LL) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw bad_params("crp_schedule_until needs alpha in (0,1)");
  if (!(theta > -alpha)) throw bad_params("crp theta must exceed -alpha");
  if (k_target < 1) throw bad_params("crp_schedule_until: k_target >= 1");
  std::vector<step_t> t{1};
  double k = 1.0;
  for (step_t n = 1; k < static_cast<double>(k_target); ++n) {
    if (n > step_cap) throw bad_params("crp_schedule_until: step cap reached");
    if (r.uniform() < (theta + alpha * k) / (theta + static_cast<double>(n))) {
      t.push_back(n + 1);
      k += 1.0;
    }
  }
  return arrival_schedule::from_times(
      std::move(t),
      "crp(" + std::to_string(alpha) + "," + std::to_string(theta) + ")");
}

/// Even-arrival transform: T_2 = 2 delta_2, T_k = T_{k-1} + 2 delta_k. The
/// result lies in the even-arrivals class, so every prefix graph is connected.
inline arrival_schedule doubled_schedule(const std::vector<std::int64_t>& base_deltas) {
  std::vector<step_t> t{1};
  step_t prev = 0;
  for (std::size_t i = 0; i < base_deltas.size(); ++i) {
    if (base_deltas[i] < 1) throw bad_params("doubled_schedule: deltas >= 1");
    prev = (i == 0 ? 2 * base_deltas[i] : prev + 2 * base_deltas[i]);
    t.push_back(prev);
  }
  return arrival_schedule::from_times(std::move(t), "doubled");
}

}  // namespace atgraph
