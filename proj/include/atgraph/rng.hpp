#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "errors.hpp"

namespace atgraph {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seeded random stream. All randomness in the library flows from a single
/// 64-bit master seed through `derive`: stream seed =
/// splitmix64(splitmix64(master ^ fnv1a64(tag)) + index). Distinct
/// (tag, index) pairs give independent streams, so parallel runs stay
/// reproducible regardless of scheduling.
class rng {
 public:
  explicit rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  static rng derive(std::uint64_t master, std::string_view tag,
                    std::uint64_t index = 0) {
    return rng(splitmix64(master ^ fnv1a64(tag)) + index);
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1); never returns an endpoint, safe under log().
  double uniform_pos() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  double exponential() { return -std::log(uniform_pos()); }

  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * f;
    have_cached_ = true;
    return u * f;
  }

  /// Gamma(shape, 1) via Marsaglia-Tsang; shape 0 is the point mass at 0.
  double gamma(double shape) {
    if (shape < 0.0 || !std::isfinite(shape))
      throw bad_params("gamma shape must be >= 0");
    if (shape == 0.0) return 0.0;
    if (shape < 1.0) {
      const double g = gamma(shape + 1.0);
      return g * std::pow(uniform_pos(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_pos();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double beta(double a, double b) {
    if (a <= 0.0 || b <= 0.0) throw bad_params("beta parameters must be > 0");
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }

  /// Geometric on {1, 2, ...} with success probability p; mean 1/p.
  std::int64_t geometric1(double p) {
    if (!(p > 0.0 && p <= 1.0)) throw bad_params("geometric p must be in (0,1]");
    if (p == 1.0) return 1;
    const double g = std::floor(std::log(uniform_pos()) / std::log1p(-p));
    return 1 + static_cast<std::int64_t>(g);
  }

  std::int64_t poisson(double lambda) {
    if (lambda < 0.0 || !std::isfinite(lambda))
      throw bad_params("poisson mean must be finite and >= 0");
    if (lambda == 0.0) return 0;
    std::poisson_distribution<std::int64_t> d(lambda);
    return d(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace atgraph
