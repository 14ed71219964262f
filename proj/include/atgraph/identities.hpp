#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "arrivals.hpp"
#include "asymptotics.hpp"
#include "core.hpp"
#include "distributions.hpp"
#include "rng.hpp"
#include "stats.hpp"

namespace atgraph {

/// One draw of the truncated stick vector (psi_j prod_{i=j+1..r} (1 - psi_i))
/// for the given arrival times; psi_1 = 1.
inline std::vector<double> sample_stick_vector(double alpha,
                                               const std::vector<step_t>& times,
                                               rng& r) {
  const std::size_t rr = times.size();
  std::vector<double> psi(rr, 1.0);
  for (std::size_t j = 2; j <= rr; ++j) {
    const double b = static_cast<double>(times[j - 1]) - 1.0 -
                     (static_cast<double>(j) - 1.0) * alpha;
    if (!(b > 0.0)) throw bad_params("stick vector: nonpositive beta parameter");
    psi[j - 1] = r.beta(1.0 - alpha, b);
  }
  std::vector<double> zeta(rr);
  double tail = 1.0;
  for (std::size_t j = rr; j >= 1; --j) {
    zeta[j - 1] = psi[j - 1] * tail;
    tail *= 1.0 - psi[j - 1];
  }
  return zeta;
}

/// Two-color urn with geometric immigration: at immigration steps a black
/// ball is added, otherwise a drawn ball is replaced along with a copy.
/// Equivalently an unbiased one-end-at-a-time graph whose seed splits w + b
/// ends into a white and a black vertex class; only the class totals matter
/// for the white count, so the run is class-aggregated.
inline std::int64_t simulate_immigration_urn(std::int64_t w, std::int64_t b,
                                             double beta, std::int64_t n,
                                             rng& r) {
  if (w < 1 || b < 1) throw bad_params("urn needs w, b >= 1");
  if (!(beta > 0.0 && beta < 1.0)) throw bad_params("urn beta in (0,1)");
  if (n < 0) throw bad_params("urn: n >= 0");
  double white = static_cast<double>(w);
  double total = static_cast<double>(w + b);
  std::int64_t next_immigration = r.geometric1(beta);
  for (std::int64_t step = 1; step <= n; ++step) {
    if (step == next_immigration) {
      next_immigration += r.geometric1(beta);
    } else {
      if (r.uniform() * total < white) white += 1.0;
    }
    total += 1.0;
  }
  return static_cast<std::int64_t>(white);
}

enum class identity_route { exact, simulated };

struct identity_spec {
  enum class family_t {
    beta_gamma_algebra,
    beta_product_split,
    pa_limits,
    crp_limits,
    ys_limits,
    urn_immigration,
  };
  enum class which_t {
    default_form,   // the family's headline identity
    joint,          // joint gamma identity (crp / ys)
    marginal,       // marginal beta / ML form
    conditional,    // one-step conditional form
    gamma_identity, // xi * Gamma^{1-beta} = Gamma form (ys / urn)
    alt_forms,      // equivalent product forms against each other
    pa_id1,
    pa_id2,
    pa_id3,
    pa_id4,
  };

  family_t family = family_t::beta_gamma_algebra;
  which_t which = which_t::default_form;
  identity_route route = identity_route::exact;

  double a = 0.5, b = 2.0, c = 2.0;   // beta/gamma shape arguments
  double alpha = 0.5;
  double theta = 1.0;
  double beta_geom = 0.5;
  std::int64_t d = 1;
  std::int64_t r = 2;
  std::int64_t w = 1, b_balls = 1;
  std::vector<step_t> fixed_times;    // conditioning arrivals (crp / ys)
  std::int64_t sim_n = 1000000;       // simulated-route horizon
  double threshold = 0.05;
  std::uint64_t seed = 0;
};

struct identity_outcome {
  test_report report;
  std::vector<test_result> components;
  std::vector<std::string> component_names;
};

namespace detail {

inline void add_component(identity_outcome& out, const std::string& name,
                          const test_result& t) {
  out.components.push_back(t);
  out.component_names.push_back(name);
}

/// Per-coordinate KS plus KS on the coordinate product.
inline void vector_ks(identity_outcome& out,
                      const std::vector<std::vector<double>>& lhs,
                      const std::vector<std::vector<double>>& rhs) {
  const std::size_t dim = lhs.size();
  for (std::size_t j = 0; j < dim; ++j)
    add_component(out, "coord" + std::to_string(j + 1),
                  ks_two_sample(lhs[j], rhs[j]));
  if (dim < 2) return;
  std::vector<double> pl(lhs[0].size(), 1.0), pr(rhs[0].size(), 1.0);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < pl.size(); ++i) pl[i] *= lhs[j][i];
    for (std::size_t i = 0; i < pr.size(); ++i) pr[i] *= rhs[j][i];
  }
  add_component(out, "product", ks_two_sample(pl, pr));
}

inline std::vector<std::vector<double>> draw_matrix(
    std::size_t dim, std::int64_t m,
    const std::function<void(std::vector<double>&)>& fill) {
  std::vector<std::vector<double>> cols(dim,
                                        std::vector<double>(static_cast<std::size_t>(m)));
  std::vector<double> row(dim);
  for (std::int64_t i = 0; i < m; ++i) {
    fill(row);
    for (std::size_t j = 0; j < dim; ++j) cols[j][static_cast<std::size_t>(i)] = row[j];
  }
  return cols;
}

struct pa_constants {
  double abar;       // 2d - alpha
  std::int64_t mbar; // 2d - 1
};

inline double sample_pa_z(const pa_constants& pc, double shift, rng& r) {
  // prod_{i=1..mbar} Gamma(shift + 1 - i/abar)^{1/abar}
  double log_z = 0.0;
  for (std::int64_t i = 1; i <= pc.mbar; ++i)
    log_z += std::log(r.gamma(shift + 1.0 - static_cast<double>(i) / pc.abar));
  return std::exp(log_z / pc.abar);
}

}  // namespace detail

/// Exact product-form draw of the joint scaled-degree limit of the
/// constant-interarrival model (d = 1): an ML(1/abar, r - 1/abar) scalar times
/// the stick vector. Matched to the martingale moments; d >= 2 has no
/// single-scalar form and must use the simulated route.
inline std::vector<double> sample_pa_xi_exact(std::int64_t d, double alpha,
                                              std::int64_t r, rng& rg) {
  if (d != 1)
    throw bad_params("exact scaled-degree draws are available for d = 1 only");
  const double abar = 2.0 * static_cast<double>(d) - alpha;
  std::vector<step_t> times(static_cast<std::size_t>(r));
  for (std::int64_t j = 1; j <= r; ++j)
    times[static_cast<std::size_t>(j - 1)] = 2 * d * (j - 1) + 1;
  const double scalar =
      sample_ml_tilted_exact(1.0 / abar, static_cast<double>(r) - 1.0 / abar, rg);
  std::vector<double> xi = sample_stick_vector(alpha, times, rg);
  for (auto& x : xi) x *= scalar;
  return xi;
}

/// Simulated scaled-degree draw for the constant-interarrival model:
/// (n / 2d)^{-(2d-1)/(2d-alpha)} deg_j(n) from one lead-degree run.
inline std::vector<double> sample_pa_xi_simulated(std::int64_t d, double alpha,
                                                  std::int64_t r, std::int64_t n,
                                                  rng& rg) {
  const arrival_schedule sched = constant_schedule(d, n / (2 * d) + 2);
  trajectory_stats traj = run_lead_trajectory(model_params(alpha), sched, n, r,
                                              rg, {n});
  const double abar = 2.0 * static_cast<double>(d) - alpha;
  const double scale = std::pow(static_cast<double>(n) / (2.0 * static_cast<double>(d)),
                                -(2.0 * static_cast<double>(d) - 1.0) / abar);
  std::vector<double> xi;
  for (std::int64_t j = 0; j < r; ++j)
    xi.push_back(scale * static_cast<double>(
                             traj.checkpoints.back().lead_degrees[static_cast<std::size_t>(j)]));
  return xi;
}

/// CRP-arrival graph conditioned on its first r arrival times: the given
/// prefix is kept and later arrivals continue by sequential thinning.
inline arrival_schedule crp_continuation_schedule(double alpha, double theta,
                                                  const std::vector<step_t>& fixed,
                                                  std::int64_t n_max, rng& r) {
  std::vector<step_t> t = fixed;
  double k = static_cast<double>(t.size());
  for (step_t n = t.back(); n < n_max; ++n)
    if (r.uniform() < (theta + alpha * k) / (theta + static_cast<double>(n))) {
      t.push_back(n + 1);
      k += 1.0;
    }
  return arrival_schedule::from_times(std::move(t), "crp-conditioned");
}

inline arrival_schedule iid_continuation_schedule(const interarrival_spec& spec,
                                                  const std::vector<step_t>& fixed,
                                                  std::int64_t n_max, rng& r) {
  std::vector<step_t> t = fixed;
  for (;;) {
    const step_t next = t.back() + spec.sample(r);
    if (next > n_max) break;
    t.push_back(next);
  }
  return arrival_schedule::from_times(std::move(t), "iid-conditioned");
}

inline std::vector<double> sample_crp_xi_exact(double alpha, double theta,
                                               const std::vector<step_t>& times,
                                               rng& rg) {
  const auto r = static_cast<std::int64_t>(times.size());
  const double tr = static_cast<double>(times.back());
  const double scalar = rg.beta(tr - static_cast<double>(r) * alpha,
                                theta + static_cast<double>(r) * alpha);
  std::vector<double> xi = sample_stick_vector(alpha, times, rg);
  for (auto& x : xi) x *= scalar;
  return xi;
}

inline std::vector<double> sample_crp_xi_simulated(double alpha, double theta,
                                                   const std::vector<step_t>& times,
                                                   std::int64_t n, rng& rg) {
  const auto r = static_cast<std::int64_t>(times.size());
  const arrival_schedule sched = crp_continuation_schedule(alpha, theta, times, n, rg);
  trajectory_stats traj =
      run_lead_trajectory(model_params(alpha), sched, n, r, rg, {n});
  std::vector<double> xi;
  for (std::int64_t j = 0; j < r; ++j)
    xi.push_back(static_cast<double>(
                     traj.checkpoints.back().lead_degrees[static_cast<std::size_t>(j)]) /
                 static_cast<double>(n));
  return xi;
}

/// Exact product-form draw of the geometric-interarrival (Yule-Simon) limit:
/// ML(1-beta, T_r - 1) Beta(T_r, (T_r-1) beta/(1-beta)) times the stick
/// vector at alpha = 0.
inline std::vector<double> sample_ys_xi_exact(double beta_geom,
                                              const std::vector<step_t>& times,
                                              rng& rg) {
  const double sigma = 1.0 - beta_geom;
  const double tr = static_cast<double>(times.back());
  double scalar = sample_ml_tilted_exact(sigma, tr - 1.0, rg);
  if (tr > 1.0) scalar *= rg.beta(tr, (tr - 1.0) * beta_geom / (1.0 - beta_geom));
  std::vector<double> xi = sample_stick_vector(0.0, times, rg);
  for (auto& x : xi) x *= scalar;
  return xi;
}

inline std::vector<double> sample_ys_xi_simulated(double beta_geom,
                                                  const std::vector<step_t>& times,
                                                  std::int64_t n, rng& rg) {
  const auto r = static_cast<std::int64_t>(times.size());
  const arrival_schedule sched = iid_continuation_schedule(
      interarrival_spec::geometric(beta_geom), times, n, rg);
  trajectory_stats traj =
      run_lead_trajectory(model_params(0.0), sched, n, r, rg, {n});
  const double scale = std::pow(static_cast<double>(n), -(1.0 - beta_geom));
  std::vector<double> xi;
  for (std::int64_t j = 0; j < r; ++j)
    xi.push_back(scale * static_cast<double>(
                             traj.checkpoints.back().lead_degrees[static_cast<std::size_t>(j)]));
  return xi;
}

namespace detail {

inline identity_outcome finish(identity_outcome out, std::string name,
                               const identity_spec& spec, std::int64_t m,
                               std::string extra_notes = "") {
  double min_p = 1.0;
  double max_stat = 0.0;
  bool pass = true;
  std::ostringstream notes;
  for (std::size_t i = 0; i < out.components.size(); ++i) {
    min_p = std::min(min_p, out.components[i].p_value);
    max_stat = std::max(max_stat, out.components[i].statistic);
    pass = pass && out.components[i].p_value > spec.threshold;
    if (i) notes << "; ";
    notes << out.component_names[i] << " p=" << out.components[i].p_value;
  }
  if (!extra_notes.empty()) notes << "; " << extra_notes;
  out.report = make_statistical_report(std::move(name), max_stat, min_p,
                                       spec.threshold, spec.seed, m, notes.str());
  out.report.passed = pass && out.report.passed;
  return out;
}

}  // namespace detail

/// Runs one named distributional identity as a seeded two-sample test.
/// Vector identities get per-coordinate KS tests plus a KS on the coordinate
/// product; the combined report carries the smallest p-value.
inline identity_outcome run_identity(const identity_spec& spec, std::int64_t m,
                                     rng& rg) {
  if (m < 10000) throw bad_params("run_identity: need at least 1e4 samples");
  identity_outcome out;
  using family_t = identity_spec::family_t;
  using which_t = identity_spec::which_t;

  switch (spec.family) {
    case family_t::beta_gamma_algebra: {
      // (G_{a+b}, B_{a,b}) vs (Ga + Gb, Ga / (Ga + Gb)), both pairs independent.
      auto lhs = detail::draw_matrix(2, m, [&](std::vector<double>& row) {
        row[0] = rg.gamma(spec.a + spec.b);
        row[1] = rg.beta(spec.a, spec.b);
      });
      auto rhs = detail::draw_matrix(2, m, [&](std::vector<double>& row) {
        const double x = rg.gamma(spec.a);
        const double y = rg.gamma(spec.b);
        row[0] = x + y;
        row[1] = x / (x + y);
      });
      detail::vector_ks(out, lhs, rhs);
      const double rho = rank_correlation(rhs[0], rhs[1]);
      const bool rho_ok = std::fabs(rho) < 0.01;
      out = detail::finish(std::move(out), "BETA_GAMMA_ALGEBRA", spec, m,
                           "sum/ratio rank corr rho=" + std::to_string(rho));
      out.report.passed = out.report.passed && rho_ok;
      return out;
    }

    case family_t::beta_product_split: {
      // B_{a,b+c} vs B_{a,b} * B_{a+b,c}.
      std::vector<double> lhs(static_cast<std::size_t>(m)), rhs(static_cast<std::size_t>(m));
      for (auto& v : lhs) v = rg.beta(spec.a, spec.b + spec.c);
      for (auto& v : rhs) v = rg.beta(spec.a, spec.b) * rg.beta(spec.a + spec.b, spec.c);
      detail::add_component(out, "scalar", ks_two_sample(lhs, rhs));
      return detail::finish(std::move(out), "BETA_PRODUCT_SPLIT", spec, m);
    }

    case family_t::pa_limits: {
      const detail::pa_constants pc{2.0 * static_cast<double>(spec.d) - spec.alpha,
                                    2 * spec.d - 1};
      std::vector<step_t> times(static_cast<std::size_t>(spec.r));
      for (std::int64_t j = 1; j <= spec.r; ++j)
        times[static_cast<std::size_t>(j - 1)] = 2 * spec.d * (j - 1) + 1;
      auto draw_xi = [&](rng& r2) {
        return spec.route == identity_route::exact
                   ? sample_pa_xi_exact(spec.d, spec.alpha, spec.r, r2)
                   : sample_pa_xi_simulated(spec.d, spec.alpha, spec.r, spec.sim_n, r2);
      };
      const which_t w = spec.which == which_t::default_form ? which_t::pa_id4 : spec.which;
      auto lhs = detail::draw_matrix(
          static_cast<std::size_t>(spec.r), m, [&](std::vector<double>& row) {
            std::vector<double> xi = draw_xi(rg);
            double z = 0.0;
            if (w == which_t::pa_id1) {
              z = detail::sample_pa_z(pc, static_cast<double>(spec.r), rg);
            } else {
              z = detail::sample_pa_z(pc, 0.0, rg);
              if (w == which_t::pa_id4)
                for (std::int64_t k = 1; k <= spec.r - 1; ++k)
                  z *= rg.beta(static_cast<double>(k) * pc.abar, 1.0 - spec.alpha);
            }
            for (std::int64_t j = 0; j < spec.r; ++j)
              row[static_cast<std::size_t>(j)] = z * xi[static_cast<std::size_t>(j)];
          });
      auto rhs = detail::draw_matrix(
          static_cast<std::size_t>(spec.r), m, [&](std::vector<double>& row) {
            std::vector<double> zeta = sample_stick_vector(spec.alpha, times, rg);
            double g = 0.0;
            const double mb = static_cast<double>(pc.mbar);
            switch (w) {
              case which_t::pa_id1:
                g = rg.gamma(static_cast<double>(spec.r) * pc.abar);
                break;
              case which_t::pa_id2:
                g = rg.gamma(static_cast<double>(spec.r) * pc.abar);
                for (std::int64_t k = 1; k <= spec.r; ++k)
                  g *= rg.beta(static_cast<double>(k) * pc.abar - mb, mb);
                break;
              case which_t::pa_id3:
                g = rg.gamma(static_cast<double>(spec.r) * pc.abar - mb);
                for (std::int64_t k = 1; k <= spec.r - 1; ++k)
                  g *= rg.beta(static_cast<double>(k) * pc.abar - mb, mb);
                break;
              default:
                g = rg.gamma(1.0 - spec.alpha);
                break;
            }
            for (std::int64_t j = 0; j < spec.r; ++j)
              row[static_cast<std::size_t>(j)] = g * zeta[static_cast<std::size_t>(j)];
          });
      detail::vector_ks(out, lhs, rhs);
      return detail::finish(std::move(out), "PA_LIMITS", spec, m,
                            spec.route == identity_route::simulated
                                ? "xi from finite-n simulation, n=" + std::to_string(spec.sim_n)
                                : "");
    }

    case family_t::crp_limits: {
      const std::vector<step_t>& times = spec.fixed_times;
      if (times.empty() || times[0] != 1)
        throw bad_params("crp_limits needs fixed arrival times starting at 1");
      const auto r = static_cast<std::int64_t>(times.size());
      const double tr = static_cast<double>(times.back());
      auto draw_xi = [&](rng& r2) {
        return spec.route == identity_route::exact
                   ? sample_crp_xi_exact(spec.alpha, spec.theta, times, r2)
                   : sample_crp_xi_simulated(spec.alpha, spec.theta, times, spec.sim_n, r2);
      };
      std::string name = "CRP_LIMITS";
      if (spec.which == which_t::marginal) {
        // xi_r | T_r is Beta(1 - alpha, T_r - 1 + theta + alpha).
        std::vector<double> lhs(static_cast<std::size_t>(m)), rhs(static_cast<std::size_t>(m));
        for (auto& v : lhs) v = draw_xi(rg).back();
        for (auto& v : rhs)
          v = rg.beta(1.0 - spec.alpha, tr - 1.0 + spec.theta + spec.alpha);
        detail::add_component(out, "marginal", ks_two_sample(lhs, rhs));
        return detail::finish(std::move(out), name + "/marginal", spec, m);
      }
      if (spec.which == which_t::conditional) {
        // xi_r | xi_{r-1} multiplies by an independent Beta(T_{r-1}+theta, delta_r).
        if (r < 2) throw bad_params("conditional form needs r >= 2");
        const std::vector<step_t> head(times.begin(), times.end() - 1);
        const double tprev = static_cast<double>(head.back());
        const double delta = tr - tprev;
        std::vector<double> lhs(static_cast<std::size_t>(m)), rhs(static_cast<std::size_t>(m));
        for (auto& v : lhs) v = draw_xi(rg).back();
        for (auto& v : rhs) {
          const double xi_prev =
              sample_crp_xi_exact(spec.alpha, spec.theta, head, rg).back();
          v = xi_prev * rg.beta(tprev + spec.theta, delta);
        }
        detail::add_component(out, "conditional", ks_two_sample(lhs, rhs));
        return detail::finish(std::move(out), name + "/conditional", spec, m);
      }
      // Joint identity: G_{T_r+theta} xi = G_{T_r - r alpha} zeta.
      auto lhs = detail::draw_matrix(
          static_cast<std::size_t>(r), m, [&](std::vector<double>& row) {
            std::vector<double> xi = draw_xi(rg);
            const double g = rg.gamma(tr + spec.theta);
            for (std::int64_t j = 0; j < r; ++j)
              row[static_cast<std::size_t>(j)] = g * xi[static_cast<std::size_t>(j)];
          });
      auto rhs = detail::draw_matrix(
          static_cast<std::size_t>(r), m, [&](std::vector<double>& row) {
            std::vector<double> zeta = sample_stick_vector(spec.alpha, times, rg);
            const double g = rg.gamma(tr - static_cast<double>(r) * spec.alpha);
            for (std::int64_t j = 0; j < r; ++j)
              row[static_cast<std::size_t>(j)] = g * zeta[static_cast<std::size_t>(j)];
          });
      detail::vector_ks(out, lhs, rhs);
      return detail::finish(std::move(out), name + "/joint", spec, m,
                            spec.route == identity_route::simulated
                                ? "xi from finite-n simulation, n=" + std::to_string(spec.sim_n)
                                : "");
    }

    case family_t::ys_limits: {
      const std::vector<step_t>& times = spec.fixed_times;
      if (times.empty() || times[0] != 1)
        throw bad_params("ys_limits needs fixed arrival times starting at 1");
      const auto r = static_cast<std::int64_t>(times.size());
      const double tr = static_cast<double>(times.back());
      const double sigma = 1.0 - spec.beta_geom;
      auto draw_xi = [&](rng& r2) {
        return spec.route == identity_route::exact
                   ? sample_ys_xi_exact(spec.beta_geom, times, r2)
                   : sample_ys_xi_simulated(spec.beta_geom, times, spec.sim_n, r2);
      };
      std::string name = "YS_LIMITS";
      if (spec.which == which_t::gamma_identity || spec.which == which_t::marginal) {
        // xi_r Gamma(T_r)^{1-beta} = Gamma(1).
        std::vector<double> lhs(static_cast<std::size_t>(m)), rhs(static_cast<std::size_t>(m));
        for (auto& v : lhs) v = draw_xi(rg).back() * std::pow(rg.gamma(tr), sigma);
        for (auto& v : rhs) v = rg.gamma(1.0);
        detail::add_component(out, "gamma_identity", ks_two_sample(lhs, rhs));
        return detail::finish(std::move(out), name + "/gamma", spec, m);
      }
      if (spec.which == which_t::alt_forms) {
        // ML(sigma) B_{1,T_r-1}^{sigma} vs ML(sigma, T_r-1) B_{1,(T_r-1)/sigma}.
        std::vector<double> lhs(static_cast<std::size_t>(m)), rhs(static_cast<std::size_t>(m));
        for (auto& v : lhs)
          v = sample_ml(sigma, rg) * std::pow(rg.beta(1.0, tr - 1.0), sigma);
        for (auto& v : rhs)
          v = sample_ml_tilted_exact(sigma, tr - 1.0, rg) *
              rg.beta(1.0, (tr - 1.0) / sigma);
        detail::add_component(out, "alt_forms", ks_two_sample(lhs, rhs));
        return detail::finish(std::move(out), name + "/alt", spec, m);
      }
      // Joint identity: Gamma(T_r)^{1-beta} xi = Gamma(T_r) zeta.
      auto lhs = detail::draw_matrix(
          static_cast<std::size_t>(r), m, [&](std::vector<double>& row) {
            std::vector<double> xi = draw_xi(rg);
            const double g = std::pow(rg.gamma(tr), sigma);
            for (std::int64_t j = 0; j < r; ++j)
              row[static_cast<std::size_t>(j)] = g * xi[static_cast<std::size_t>(j)];
          });
      auto rhs = detail::draw_matrix(
          static_cast<std::size_t>(r), m, [&](std::vector<double>& row) {
            std::vector<double> zeta = sample_stick_vector(0.0, times, rg);
            const double g = rg.gamma(tr);
            for (std::int64_t j = 0; j < r; ++j)
              row[static_cast<std::size_t>(j)] = g * zeta[static_cast<std::size_t>(j)];
          });
      detail::vector_ks(out, lhs, rhs);
      return detail::finish(std::move(out), name + "/joint", spec, m,
                            spec.route == identity_route::simulated
                                ? "xi from finite-n simulation, n=" + std::to_string(spec.sim_n)
                                : "");
    }

    case family_t::urn_immigration: {
      const double beta = spec.beta_geom;
      const double sigma = 1.0 - beta;
      const double wd = static_cast<double>(spec.w);
      const double bd = static_cast<double>(spec.b_balls);
      const double wb = wd + bd;
      auto product_form = [&](rng& r2) {
        double v = r2.beta(wd, bd) * sample_ml_tilted_exact(sigma, wb - 1.0, r2);
        if (wb > 1.0) v *= r2.beta(wb, (wb - 1.0) * beta / sigma);
        return v;
      };
      std::string name = "URN_IMMIGRATION";
      if (spec.which == which_t::alt_forms) {
        std::vector<double> lhs(static_cast<std::size_t>(m)), rhs(static_cast<std::size_t>(m)),
            rhs2(static_cast<std::size_t>(m));
        for (auto& v : lhs) v = product_form(rg);
        for (auto& v : rhs)
          v = rg.beta(wd, ((wd - 1.0) * beta + bd) / sigma) *
              sample_ml_tilted_exact(sigma, wb - 1.0, rg);
        for (auto& v : rhs2)
          v = rg.beta(wd, (wd * beta + bd) / sigma) *
              sample_ml_tilted_exact(sigma, wb, rg);
        detail::add_component(out, "form2", ks_two_sample(lhs, rhs));
        detail::add_component(out, "form3", ks_two_sample(lhs, rhs2));
        return detail::finish(std::move(out), name + "/alt", spec, m);
      }
      if (spec.which == which_t::gamma_identity) {
        // xi Gamma(w+b)^{1-beta} = Gamma(w).
        std::vector<double> lhs(static_cast<std::size_t>(m)), rhs(static_cast<std::size_t>(m));
        const bool simulated = spec.route == identity_route::simulated;
        for (auto& v : lhs) {
          const double xi =
              simulated ? std::pow(static_cast<double>(spec.sim_n), -sigma) *
                              static_cast<double>(simulate_immigration_urn(
                                  spec.w, spec.b_balls, beta, spec.sim_n, rg))
                        : product_form(rg);
          v = xi * std::pow(rg.gamma(wb), sigma);
        }
        for (auto& v : rhs) v = rg.gamma(wd);
        detail::add_component(out, "gamma_identity", ks_two_sample(lhs, rhs));
        return detail::finish(std::move(out), name + "/gamma", spec, m);
      }
      // Headline: scaled white count against the product form.
      std::vector<double> lhs(static_cast<std::size_t>(m)), rhs(static_cast<std::size_t>(m));
      const double scale = std::pow(static_cast<double>(spec.sim_n), -sigma);
      for (auto& v : lhs)
        v = scale * static_cast<double>(simulate_immigration_urn(
                        spec.w, spec.b_balls, beta, spec.sim_n, rg));
      for (auto& v : rhs) v = product_form(rg);
      detail::add_component(out, "scaled_count", ks_two_sample(lhs, rhs));
      return detail::finish(std::move(out), name, spec, m,
                            "white count from simulation, n=" + std::to_string(spec.sim_n));
    }
  }
  throw bad_params("unknown identity family");
}

}  // namespace atgraph
