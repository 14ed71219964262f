#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "rng.hpp"
#include "samplers.hpp"
#include "special.hpp"

namespace atgraph {

enum class regime { sublinear, linear };

/// Empirical degree distribution p_d = m_d / |V| for d = 1..d_max, with the
/// mass beyond d_max reported separately.
struct degree_pmf {
  std::vector<double> pmf;  // pmf[d-1]
  double tail_mass = 0.0;
};

inline degree_pmf degree_histogram(const multigraph_view& view,
                                   std::int64_t d_max) {
  degree_pmf out;
  out.pmf.assign(static_cast<std::size_t>(d_max), 0.0);
  if (view.num_vertices == 0) return out;
  std::int64_t beyond = 0;
  for (std::int64_t d : view.degrees) {
    if (d <= d_max)
      out.pmf[static_cast<std::size_t>(d - 1)] += 1.0;
    else
      ++beyond;
  }
  const double k = static_cast<double>(view.num_vertices);
  for (auto& p : out.pmf) p /= k;
  out.tail_mass = static_cast<double>(beyond) / k;
  return out;
}

/// p_d = alpha Gamma(d - alpha) / (Gamma(d+1) Gamma(1 - alpha)); the
/// diverging-degree regime law, power-law tail with exponent 1 + alpha.
inline std::vector<double> limit_pmf_sublinear(double alpha, std::int64_t d_max) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw bad_params("sublinear limit pmf needs alpha in (0,1)");
  std::vector<double> pmf(static_cast<std::size_t>(d_max));
  const double base = std::log(alpha) - log_gamma(1.0 - alpha);
  for (std::int64_t d = 1; d <= d_max; ++d)
    pmf[static_cast<std::size_t>(d - 1)] =
        std::exp(base + log_gamma(static_cast<double>(d) - alpha) -
                 log_gamma(static_cast<double>(d) + 1.0));
  return pmf;
}

inline double gamma_exponent(double alpha, double mu) {
  if (!(mu > 1.0)) throw bad_params("linear regime needs mean interarrival > 1");
  return (mu - alpha) / (mu - 1.0);
}

/// p_d = gamma Gamma(d - alpha) Gamma(1 - alpha + gamma) /
///       (Gamma(d + 1 - alpha + gamma) Gamma(1 - alpha)); generalizes the
/// Yule-Simon law (alpha = 0), power-law tail with exponent 1 + gamma.
inline std::vector<double> limit_pmf_linear(double alpha, double mu,
                                            std::int64_t d_max) {
  if (!(alpha < 1.0)) throw bad_params("alpha must be < 1");
  const double g = gamma_exponent(alpha, mu);
  std::vector<double> pmf(static_cast<std::size_t>(d_max));
  const double base =
      std::log(g) + log_gamma(1.0 - alpha + g) - log_gamma(1.0 - alpha);
  for (std::int64_t d = 1; d <= d_max; ++d)
    pmf[static_cast<std::size_t>(d - 1)] =
        std::exp(base + log_gamma(static_cast<double>(d) - alpha) -
                 log_gamma(static_cast<double>(d) + 1.0 - alpha + g));
  return pmf;
}

namespace detail {

inline double mixture_beta_a(regime reg, double alpha, double mu) {
  if (reg == regime::sublinear) {
    if (!(alpha > 0.0 && alpha < 1.0))
      throw bad_params("sublinear regime needs alpha in (0,1)");
    return alpha;
  }
  return gamma_exponent(alpha, mu);
}

}  // namespace detail

/// Limit of the degree of a uniformly sampled vertex, drawn as a mixed
/// geometric on {1,2,...}: D ~ Geom(B), B ~ Beta(alpha, 1-alpha) in the
/// sub-linear regime, Beta(gamma, 1-alpha) in the linear one.
inline std::int64_t sample_limit_degree_geom(regime reg, double alpha, double mu,
                                             rng& r) {
  const double a = detail::mixture_beta_a(reg, alpha, mu);
  const double b = r.beta(a, 1.0 - alpha);
  if (b >= 1.0) return 1;
  return 1 + static_cast<std::int64_t>(
                 std::floor(std::log(r.uniform_pos()) / std::log1p(-b)));
}

/// The same limit via the Poisson coupling: D = 1 + Poisson((1-B)/B * G),
/// G ~ Gamma(1-alpha), B ~ Beta(alpha, 1) or Beta(gamma, 1).
inline std::int64_t sample_limit_degree_poisson(regime reg, double alpha,
                                                double mu, rng& r) {
  const double a = detail::mixture_beta_a(reg, alpha, mu);
  const double b = r.beta(a, 1.0);
  const double lambda = (1.0 - b) / b * r.gamma(1.0 - alpha);
  return 1 + r.poisson(lambda);
}

/// Logarithmic 1-2-5 checkpoint grid up to n_ends (n_ends always included).
inline std::vector<step_t> checkpoint_grid(step_t n_ends) {
  std::vector<step_t> grid;
  for (step_t decade = 1; decade <= n_ends && decade > 0; decade *= 10)
    for (step_t mult : {1, 2, 5}) {
      const step_t v = decade * mult;
      if (v <= n_ends) grid.push_back(v);
    }
  if (grid.empty() || grid.back() != n_ends) grid.push_back(n_ends);
  return grid;
}

struct trajectory_checkpoint {
  step_t n = 0;
  std::int64_t num_vertices = 0;
  std::vector<std::int64_t> lead_degrees;  // degrees of vertices 1..r
  std::vector<std::int64_t> histogram;     // counts for degrees 1..d_max
  std::int64_t histogram_tail = 0;         // vertices with degree > d_max
};

struct trajectory_stats {
  std::vector<trajectory_checkpoint> checkpoints;
  double sigma_hat = 0.0;   // filled by density_exponent
  double gamma_hat = 0.0;   // (mu - alpha)/(mu - 1) when the caller knows mu
};

/// Degree-biased run that tracks only the first r degrees plus an aggregate
/// for everything else. Exact in law for the tracked coordinates and O(1)
/// per end, which makes long-trajectory diagnostics cheap.
inline trajectory_stats run_lead_trajectory(const model_params& params,
                                            const arrival_schedule& schedule,
                                            step_t n_ends, std::int64_t r,
                                            rng& rg,
                                            const std::vector<step_t>& grid_in = {}) {
  if (n_ends < 1 || r < 1) throw bad_params("run_lead_trajectory: n_ends, r >= 1");
  const std::vector<step_t> grid =
      grid_in.empty() ? checkpoint_grid(n_ends) : grid_in;
  trajectory_stats out;
  std::vector<std::int64_t> lead;  // degrees of vertices 1..min(r, k)
  std::int64_t rest_vertices = 0;
  std::int64_t rest_ends = 0;
  label_t k = 0;
  std::size_t gi = 0;
  const double alpha = params.alpha;
  for (step_t n = 1; n <= n_ends; ++n) {
    if (n == schedule.time(k + 1)) {
      ++k;
      if (k <= r) {
        lead.push_back(1);
      } else {
        ++rest_vertices;
        ++rest_ends;
      }
    } else {
      const double total = static_cast<double>(n - 1) -
                           alpha * static_cast<double>(k);
      double target = rg.uniform() * total;
      bool placed = false;
      for (auto& d : lead) {
        target -= static_cast<double>(d) - alpha;
        if (target < 0.0) {
          ++d;
          placed = true;
          break;
        }
      }
      if (!placed) ++rest_ends;
    }
    while (gi < grid.size() && grid[gi] == n) {
      trajectory_checkpoint cp;
      cp.n = n;
      cp.num_vertices = k;
      cp.lead_degrees = lead;
      out.checkpoints.push_back(std::move(cp));
      ++gi;
    }
  }
  return out;
}

/// Full degree-biased run with per-checkpoint degree histograms.
inline trajectory_stats run_trajectory(const model_params& params,
                                       const arrival_schedule& schedule,
                                       step_t n_ends, std::int64_t r,
                                       std::int64_t d_max, rng& rg) {
  if (n_ends < 1) throw bad_params("run_trajectory: n_ends >= 1");
  const std::vector<step_t> grid = checkpoint_grid(n_ends);
  trajectory_stats out;
  degree_biased_picker picker(params.alpha);
  label_t k = 0;
  std::size_t gi = 0;
  for (step_t n = 1; n <= n_ends; ++n) {
    if (n == schedule.time(k + 1)) {
      ++k;
      picker.add_vertex();
    } else {
      picker.increment(picker.pick(rg.uniform()));
    }
    while (gi < grid.size() && grid[gi] == n) {
      trajectory_checkpoint cp;
      cp.n = n;
      cp.num_vertices = k;
      const auto& deg = picker.degrees();
      for (std::int64_t j = 0; j < std::min<std::int64_t>(r, k); ++j)
        cp.lead_degrees.push_back(deg[static_cast<std::size_t>(j)]);
      cp.histogram.assign(static_cast<std::size_t>(d_max), 0);
      for (std::int64_t d : deg) {
        if (d <= d_max)
          ++cp.histogram[static_cast<std::size_t>(d - 1)];
        else
          ++cp.histogram_tail;
      }
      out.checkpoints.push_back(std::move(cp));
      ++gi;
    }
  }
  return out;
}

struct scaled_degree_point {
  step_t n = 0;
  std::vector<double> scaled;  // n^{-1/gamma} deg_j(n)
};

struct scaled_degrees_result {
  std::vector<scaled_degree_point> points;
  double last_decade_drift = 0.0;  // relative drift of the first coordinate
};

/// Degree vectors scaled by n^{-1/gamma}; gamma = 1 reproduces the plain
/// n^{-1} normalization of the sub-linear regime.
inline scaled_degrees_result scaled_degrees(const trajectory_stats& stats,
                                            std::int64_t r, double gamma) {
  if (!(gamma > 0.0)) throw bad_params("scaled_degrees: gamma > 0");
  scaled_degrees_result out;
  for (const auto& cp : stats.checkpoints) {
    scaled_degree_point pt;
    pt.n = cp.n;
    const double scale = std::pow(static_cast<double>(cp.n), -1.0 / gamma);
    for (std::int64_t j = 0;
         j < std::min<std::int64_t>(r, static_cast<std::int64_t>(cp.lead_degrees.size()));
         ++j)
      pt.scaled.push_back(scale *
                          static_cast<double>(cp.lead_degrees[static_cast<std::size_t>(j)]));
    out.points.push_back(std::move(pt));
  }
  const step_t n_last = out.points.empty() ? 0 : out.points.back().n;
  for (const auto& pt : out.points) {
    if (pt.n * 10 == n_last && !pt.scaled.empty() &&
        !out.points.back().scaled.empty()) {
      const double a = pt.scaled[0];
      const double b = out.points.back().scaled[0];
      if (a > 0.0) out.last_decade_drift = std::fabs(b / a - 1.0);
    }
  }
  return out;
}

struct martingale_point {
  step_t n = 0;
  double z = 0.0;
};

/// Martingale statistic along a trajectory: a gamma-ratio weight of the lead
/// degrees, normalized so that deterministic arrival corrections cancel and
/// the conditional expectation is constant from the r-th arrival on.
/// Checkpoints before the r-th arrival are skipped. Exponents must satisfy
/// p_j > -(1 - alpha)/2.
inline std::vector<martingale_point> martingale_statistic(
    const std::vector<double>& p, const model_params& params,
    const arrival_schedule& schedule, const trajectory_stats& stats) {
  const auto r = static_cast<std::int64_t>(p.size());
  const double alpha = params.alpha;
  if (r < 1) throw bad_params("martingale_statistic: need at least one exponent");
  for (double pj : p)
    if (!(pj > -(1.0 - alpha) / 2.0))
      throw bad_params("martingale exponents must exceed -(1-alpha)/2");
  if (schedule.num_finite() < r)
    throw bad_params("schedule realizes fewer than r vertices");
  double p_bar = 0.0;
  for (double pj : p) p_bar += pj;

  std::vector<martingale_point> out;
  out.reserve(stats.checkpoints.size());
  double correction = 0.0;  // sum over arrivals k in (r, k_n]
  label_t corrected_through = static_cast<label_t>(r);
  for (const auto& cp : stats.checkpoints) {
    if (cp.n < schedule.time(static_cast<label_t>(r))) continue;
    const double kd = static_cast<double>(cp.num_vertices);
    while (corrected_through < cp.num_vertices) {
      ++corrected_through;
      const double tk = static_cast<double>(schedule.time(corrected_through));
      const double kk = static_cast<double>(corrected_through);
      correction += log_gamma(tk - kk * alpha + p_bar) - log_gamma(tk - kk * alpha) +
                    log_gamma(tk - 1.0 - (kk - 1.0) * alpha) -
                    log_gamma(tk - 1.0 - (kk - 1.0) * alpha + p_bar);
    }
    double lz = log_gamma(static_cast<double>(cp.n) - kd * alpha) -
                log_gamma(static_cast<double>(cp.n) - kd * alpha + p_bar) +
                correction;
    if (static_cast<std::int64_t>(cp.lead_degrees.size()) < r)
      throw bad_params("trajectory tracks fewer than r lead degrees");
    for (std::int64_t j = 0; j < r; ++j) {
      const double dj = static_cast<double>(cp.lead_degrees[static_cast<std::size_t>(j)]);
      lz += log_gamma(dj - alpha + p[static_cast<std::size_t>(j)]) -
            log_gamma(dj - alpha);
    }
    out.push_back({cp.n, std::exp(lz)});
  }
  return out;
}

/// Closed-form value of the martingale at the r-th arrival: the product of
/// beta moments E[psi_j^{p_j} (1 - psi_j)^{pbar_{j-1}}] for j = 2..r.
inline double martingale_expected_value(const std::vector<double>& p,
                                        const model_params& params,
                                        const arrival_schedule& schedule) {
  const auto r = static_cast<std::int64_t>(p.size());
  const double alpha = params.alpha;
  double log_m = 0.0;
  double p_bar_prev = p.empty() ? 0.0 : p[0];
  for (std::int64_t j = 2; j <= r; ++j) {
    const double c = 1.0 - alpha;
    const double d = static_cast<double>(schedule.time(j)) - 1.0 -
                     (static_cast<double>(j) - 1.0) * alpha;
    const double a = p[static_cast<std::size_t>(j - 1)];
    const double b = p_bar_prev;
    log_m += log_gamma(c + a) + log_gamma(d + b) + log_gamma(c + d) -
             log_gamma(c) - log_gamma(d) - log_gamma(c + d + a + b);
    p_bar_prev += a;
  }
  return std::exp(log_m);
}

/// Left-relative increments x_j / (x_1 + ... + x_j).
inline std::vector<double> ntl_increments(const std::vector<double>& xs) {
  if (xs.empty()) throw zero_sum("ntl_increments: empty input");
  std::vector<double> inc;
  inc.reserve(xs.size());
  double run = 0.0;
  for (double x : xs) {
    if (!(x > 0.0)) throw zero_sum("ntl_increments: entries must be positive");
    run += x;
    inc.push_back(x / run);
  }
  return inc;
}

struct density_estimate {
  double sigma_hat = 0.0;
  double mu_hat = 0.0;
  double epsilon_hat = 0.0;
  bool out_of_regime = false;  // vertex count not growing polynomially
};

/// Log-log regression of |V(G_n)| on n over the final two decades of
/// checkpoints. mu_hat comes from the fitted intercept -sigma log mu.
inline density_estimate density_exponent(const trajectory_stats& stats) {
  const auto& cps = stats.checkpoints;
  if (cps.size() < 5) throw insufficient_data("density_exponent: too few checkpoints");
  const step_t n_last = cps.back().n;
  if (cps.front().n * 100 > n_last)
    throw insufficient_data("density_exponent: need at least two decades");
  std::vector<double> xs, ys;
  for (const auto& cp : cps) {
    if (cp.n * 100 < n_last) continue;
    if (cp.num_vertices < 1) continue;
    xs.push_back(std::log(static_cast<double>(cp.n)));
    ys.push_back(std::log(static_cast<double>(cp.num_vertices)));
  }
  if (xs.size() < 3) throw insufficient_data("density_exponent: too few points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  density_estimate est;
  est.sigma_hat = sxy / sxx;
  const double intercept = my - est.sigma_hat * mx;
  if (est.sigma_hat < 0.05) {
    est.out_of_regime = true;
    return est;
  }
  est.mu_hat = std::exp(-intercept / est.sigma_hat);
  est.epsilon_hat = 1.0 / est.sigma_hat;
  return est;
}

struct hill_result {
  double eta_hat = 0.0;
  std::int64_t d_min = 0;
  std::int64_t tail_count = 0;
  double eta_deep = 0.0;
  bool non_power_law = false;
};

namespace detail {

inline double hill_eta(const std::vector<std::int64_t>& sorted, std::int64_t d_min) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), d_min);
  const auto m = static_cast<double>(sorted.end() - it);
  double s = 0.0;
  for (; it != sorted.end(); ++it)
    s += std::log(static_cast<double>(*it) / (static_cast<double>(d_min) - 0.5));
  return 1.0 + m / s;
}

}  // namespace detail

/// Hill-style tail exponent on degree samples. d_min defaults to the deepest
/// cut that keeps at least tail_fraction of the sample (the "1% tail" rule);
/// a second estimate at a 10x deeper cut flags tails that are not power-law
/// (relative disagreement above 30%).
inline hill_result tail_exponent_from_samples(std::vector<std::int64_t> samples,
                                              double tail_fraction = 0.01,
                                              std::int64_t min_tail_count = 100) {
  if (samples.empty()) throw insufficient_tail("tail_exponent: empty sample");
  std::sort(samples.begin(), samples.end());
  const auto m = static_cast<std::int64_t>(samples.size());
  auto tail_count_at = [&](std::int64_t d) {
    return m - static_cast<std::int64_t>(std::lower_bound(samples.begin(),
                                                          samples.end(), d) -
                                         samples.begin());
  };
  std::int64_t d_min = 2;
  while (tail_count_at(d_min + 1) >=
         std::max<std::int64_t>(min_tail_count,
                                static_cast<std::int64_t>(tail_fraction *
                                                          static_cast<double>(m))))
    ++d_min;
  hill_result res;
  res.d_min = d_min;
  res.tail_count = tail_count_at(d_min);
  if (res.tail_count < min_tail_count)
    throw insufficient_tail("tail_exponent: fewer than " +
                            std::to_string(min_tail_count) + " tail observations");
  res.eta_hat = detail::hill_eta(samples, d_min);

  std::int64_t d_deep = d_min;
  while (tail_count_at(d_deep + 1) >=
         std::max<std::int64_t>(min_tail_count / 2,
                                static_cast<std::int64_t>(0.1 * tail_fraction *
                                                          static_cast<double>(m))))
    ++d_deep;
  if (d_deep > d_min) {
    res.eta_deep = detail::hill_eta(samples, d_deep);
    res.non_power_law = std::fabs(res.eta_deep / res.eta_hat - 1.0) > 0.3;
  }
  return res;
}

/// Population version of the Hill functional for a pmf table over d = 1..len.
inline hill_result tail_exponent_from_pmf(const std::vector<double>& pmf,
                                          double tail_fraction = 0.01) {
  if (pmf.empty()) throw insufficient_tail("tail_exponent: empty pmf");
  const auto dmax = static_cast<std::int64_t>(pmf.size());
  std::vector<double> tail(pmf.size() + 1, 0.0);
  for (std::int64_t d = dmax; d >= 1; --d)
    tail[static_cast<std::size_t>(d - 1)] =
        tail[static_cast<std::size_t>(d)] + pmf[static_cast<std::size_t>(d - 1)];
  auto eta_at = [&](std::int64_t d_min) {
    double s = 0.0;
    for (std::int64_t d = d_min; d <= dmax; ++d)
      s += pmf[static_cast<std::size_t>(d - 1)] *
           std::log(static_cast<double>(d) / (static_cast<double>(d_min) - 0.5));
    return 1.0 + tail[static_cast<std::size_t>(d_min - 1)] / s;
  };
  auto deepest_cut = [&](double frac) {
    std::int64_t d = 2;
    while (d < dmax && tail[static_cast<std::size_t>(d)] >= frac) ++d;
    return d;
  };
  hill_result res;
  res.d_min = deepest_cut(tail_fraction);
  if (tail[static_cast<std::size_t>(res.d_min - 1)] < tail_fraction / 2.0)
    throw insufficient_tail("tail_exponent: pmf table has no usable tail");
  res.eta_hat = eta_at(res.d_min);
  const std::int64_t d_deep = deepest_cut(tail_fraction / 10.0);
  if (d_deep > res.d_min) {
    res.eta_deep = eta_at(d_deep);
    res.non_power_law = std::fabs(res.eta_deep / res.eta_hat - 1.0) > 0.3;
  }
  return res;
}

/// Tail stick product W_{1,k} = prod_{i=2..k} (1 - psi_i) for a schedule;
/// the regime dichotomy diagnostic.
inline double sample_w_tail(const model_params& params,
                            const arrival_schedule& schedule, std::int64_t k,
                            rng& r) {
  if (schedule.num_finite() < k)
    throw bad_params("sample_w_tail: schedule realizes fewer than k vertices");
  double w = 1.0;
  for (std::int64_t j = 2; j <= k; ++j) {
    const double b = static_cast<double>(schedule.time(j)) - 1.0 -
                     (static_cast<double>(j) - 1.0) * params.alpha;
    w *= 1.0 - r.beta(1.0 - params.alpha, b);
  }
  return w;
}

}  // namespace atgraph
