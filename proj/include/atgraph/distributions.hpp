#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "rng.hpp"
#include "special.hpp"

namespace atgraph {

/// Zolotarev's function for one-sided stable laws,
/// A(u) = [sin(sigma u)^sigma sin((1-sigma)u)^(1-sigma) / sin(u)]^(1/(1-sigma)),
/// increasing on (0, pi) from A(0+) = [sigma^sigma (1-sigma)^(1-sigma)]^(1/(1-sigma)).
inline double log_zolotarev_a(double u, double sigma) {
  return (sigma * std::log(std::sin(sigma * u)) +
          (1.0 - sigma) * std::log(std::sin((1.0 - sigma) * u)) -
          std::log(std::sin(u))) /
         (1.0 - sigma);
}

inline double log_zolotarev_a_min(double sigma) {
  return (sigma * std::log(sigma) + (1.0 - sigma) * std::log1p(-sigma)) /
         (1.0 - sigma);
}

/// Positive sigma-stable variable with Laplace transform exp(-lambda^sigma)
/// (Kanter's method).
inline double sample_positive_stable(double sigma, rng& r) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw bad_params("stable sigma in (0,1)");
  const double u = std::numbers::pi * r.uniform_pos();
  const double e = r.exponential();
  const double log_a = log_zolotarev_a(u, sigma);
  return std::exp((1.0 - sigma) / sigma * (log_a - std::log(e)));
}

/// Generalized Mittag-Leffler sample, the -sigma power of a polynomially
/// tilted positive stable variable. Exact two-stage scheme:
///   1. draw U on (0, pi) with density proportional to A(U)^(-b),
///      b = (1-sigma) theta / sigma, by rejection from the uniform
///      (A is increasing, so A(0+)^(-b) bounds the target);
///   2. draw Y ~ Gamma(b + 1) / A(U) and return Y^(1-sigma).
/// At theta = 0 stage 1 accepts always and the scheme reduces to Kanter's
/// construction of the plain Mittag-Leffler law. Requires theta >= 0.
inline double sample_ml_tilted_exact(double sigma, double theta, rng& r) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw bad_params("ml sigma in (0,1)");
  if (!(theta >= 0.0))
    throw bad_params("exact tilted sampler needs theta >= 0; use the CRP route");
  const double b = (1.0 - sigma) * theta / sigma;
  const double log_a_min = log_zolotarev_a_min(sigma);
  double u = std::numbers::pi * r.uniform_pos();
  if (b > 0.0) {
    for (std::int64_t it = 0;; ++it) {
      if (std::log(r.uniform_pos()) < -b * (log_zolotarev_a(u, sigma) - log_a_min))
        break;
      if (it > 100000000) throw error("tilted sampler failed to accept");
      u = std::numbers::pi * r.uniform_pos();
    }
  }
  const double y = r.gamma(b + 1.0) * std::exp(-log_zolotarev_a(u, sigma));
  return std::pow(y, 1.0 - sigma);
}

inline double sample_ml(double sigma, rng& r) {
  return sample_ml_tilted_exact(sigma, 0.0, r);
}

/// Approximate generalized Mittag-Leffler draw as the scaled block count of a
/// CRP(sigma, theta) after n steps. Biased at finite n; callers must surface
/// the approximation flag.
inline double sample_ml_crp_approx(double sigma, double theta, std::int64_t n,
                                   rng& r) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw bad_params("ml sigma in (0,1)");
  if (!(theta > -sigma)) throw bad_params("ml theta must exceed -sigma");
  if (n < 1) throw bad_params("ml approx horizon must be >= 1");
  double k = 1.0;
  for (std::int64_t m = 1; m < n; ++m)
    if (r.uniform() < (theta + sigma * k) / (theta + static_cast<double>(m)))
      k += 1.0;
  return k / std::pow(static_cast<double>(n), sigma);
}

/// E[M^p] for M ~ ML(sigma, theta).
inline double ml_moment(double sigma, double theta, double p) {
  return std::exp(log_gamma(theta + 1.0) + log_gamma(theta / sigma + 1.0 + p) -
                  log_gamma(theta / sigma + 1.0) -
                  log_gamma(theta + 1.0 + sigma * p));
}

/// Recipe for one scalar draw; products and scalings compose recipes.
struct dist_spec {
  enum class kind_t {
    beta,
    gamma,
    gga,        // gamma(a) raised to the power b
    stable,
    ml,
    ml_theta,   // generalized ML; approximate by default
    product,
    scaled,
  };

  kind_t kind = kind_t::gamma;
  double a = 1.0;
  double b = 0.0;
  std::int64_t approx_n = 1000000;
  bool use_exact_tilted = false;
  double factor = 1.0;
  std::vector<dist_spec> children;

  static dist_spec make_beta(double a, double b) {
    if (!(a > 0.0 && b > 0.0)) throw bad_params("beta parameters must be > 0");
    dist_spec s;
    s.kind = kind_t::beta;
    s.a = a;
    s.b = b;
    return s;
  }
  static dist_spec make_gamma(double a) {
    if (!(a > 0.0)) throw bad_params("gamma shape must be > 0");
    dist_spec s;
    s.kind = kind_t::gamma;
    s.a = a;
    return s;
  }
  static dist_spec make_gga(double a, double power) {
    if (!(a > 0.0)) throw bad_params("gga shape must be > 0");
    dist_spec s;
    s.kind = kind_t::gga;
    s.a = a;
    s.b = power;
    return s;
  }
  static dist_spec make_stable(double sigma) {
    if (!(sigma > 0.0 && sigma < 1.0)) throw bad_params("stable sigma in (0,1)");
    dist_spec s;
    s.kind = kind_t::stable;
    s.a = sigma;
    return s;
  }
  static dist_spec make_ml(double sigma) {
    if (!(sigma > 0.0 && sigma < 1.0)) throw bad_params("ml sigma in (0,1)");
    dist_spec s;
    s.kind = kind_t::ml;
    s.a = sigma;
    return s;
  }
  static dist_spec make_ml_theta(double sigma, double theta,
                                 bool exact_tilted = false,
                                 std::int64_t approx_n = 1000000) {
    if (!(sigma > 0.0 && sigma < 1.0)) throw bad_params("ml sigma in (0,1)");
    if (!(theta > -sigma)) throw bad_params("ml theta must exceed -sigma");
    dist_spec s;
    s.kind = kind_t::ml_theta;
    s.a = sigma;
    s.b = theta;
    s.use_exact_tilted = exact_tilted;
    s.approx_n = approx_n;
    return s;
  }
  static dist_spec make_product(std::vector<dist_spec> parts) {
    dist_spec s;
    s.kind = kind_t::product;
    s.children = std::move(parts);
    return s;
  }
  static dist_spec make_scaled(dist_spec inner, double factor) {
    dist_spec s;
    s.kind = kind_t::scaled;
    s.factor = factor;
    s.children.push_back(std::move(inner));
    return s;
  }

  double sample(rng& r) const {
    switch (kind) {
      case kind_t::beta: return r.beta(a, b);
      case kind_t::gamma: return r.gamma(a);
      case kind_t::gga: return std::pow(r.gamma(a), b);
      case kind_t::stable: return sample_positive_stable(a, r);
      case kind_t::ml: return sample_ml(a, r);
      case kind_t::ml_theta:
        return use_exact_tilted ? sample_ml_tilted_exact(a, b, r)
                                : sample_ml_crp_approx(a, b, approx_n, r);
      case kind_t::product: {
        double v = 1.0;
        for (const auto& c : children) v *= c.sample(r);
        return v;
      }
      case kind_t::scaled: return factor * children[0].sample(r);
    }
    throw bad_params("unknown dist_spec kind");
  }

  /// True when any component draws through the finite-n CRP approximation.
  bool approximate() const {
    if (kind == kind_t::ml_theta && !use_exact_tilted) return true;
    for (const auto& c : children)
      if (c.approximate()) return true;
    return false;
  }

  std::string describe() const {
    switch (kind) {
      case kind_t::beta:
        return "Beta(" + std::to_string(a) + "," + std::to_string(b) + ")";
      case kind_t::gamma: return "Gamma(" + std::to_string(a) + ")";
      case kind_t::gga:
        return "Gamma(" + std::to_string(a) + ")^" + std::to_string(b);
      case kind_t::stable: return "Stable(" + std::to_string(a) + ")";
      case kind_t::ml: return "ML(" + std::to_string(a) + ")";
      case kind_t::ml_theta:
        return std::string(use_exact_tilted ? "ML" : "ML~approx") + "(" +
               std::to_string(a) + "," + std::to_string(b) + ")";
      case kind_t::product: {
        std::string s = "prod(";
        for (std::size_t i = 0; i < children.size(); ++i)
          s += (i ? "," : "") + children[i].describe();
        return s + ")";
      }
      case kind_t::scaled:
        return std::to_string(factor) + "*" + children[0].describe();
    }
    return "?";
  }
};

inline std::vector<double> sample_dist(const dist_spec& spec, std::int64_t m,
                                       rng& r) {
  if (m < 1) throw bad_params("sample_dist: m >= 1");
  std::vector<double> out(static_cast<std::size_t>(m));
  for (auto& v : out) v = spec.sample(r);
  return out;
}

}  // namespace atgraph
