#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "core.hpp"
#include "rng.hpp"

namespace atgraph {

namespace detail {

/// Fenwick tree over nonnegative weights with prefix-sum descent.
class fenwick_tree {
 public:
  void push_back(double w) {
    tree_.push_back(w);
    const std::size_t i = tree_.size();        // 1-based position
    const std::size_t lsb = i & (~i + 1);
    // Fold completed children into the new node.
    for (std::size_t step = 1; step < lsb; step <<= 1)
      tree_[i - 1] += tree_[i - 1 - step];
    if (mask_ == 0) mask_ = 1;
    while (mask_ * 2 <= tree_.size()) mask_ <<= 1;
  }

  void add(std::size_t idx, double delta) {
    for (std::size_t i = idx + 1; i <= tree_.size(); i += i & (~i + 1))
      tree_[i - 1] += delta;
  }

  /// Largest index whose prefix sum (exclusive) does not exceed target.
  std::size_t find(double target) const {
    std::size_t pos = 0;
    for (std::size_t step = mask_; step > 0; step >>= 1) {
      const std::size_t next = pos + step;
      if (next <= tree_.size() && tree_[next - 1] < target) {
        pos = next;
        target -= tree_[next - 1];
      }
    }
    return pos < tree_.size() ? pos : tree_.size() - 1;
  }

  std::size_t size() const { return tree_.size(); }

 private:
  std::vector<double> tree_;
  std::size_t mask_ = 0;
};

}  // namespace detail

/// Weighted pick over vertices with weight deg_k - alpha. Uses a cumulative
/// scan while the vertex count is small and switches to a Fenwick tree above
/// the threshold, keeping updates O(log k) on long runs. The total weight is
/// tracked exactly as (#ends) - alpha * (#vertices).
class degree_biased_picker {
 public:
  explicit degree_biased_picker(double alpha, std::size_t fenwick_threshold = 1024)
      : alpha_(alpha), threshold_(fenwick_threshold) {}

  void add_vertex() {
    degrees_.push_back(1);
    ++total_ends_;
    if (use_tree_) {
      tree_.push_back(1.0 - alpha_);
    } else if (degrees_.size() > threshold_) {
      use_tree_ = true;
      for (std::int64_t d : degrees_)
        tree_.push_back(static_cast<double>(d) - alpha_);
    }
  }

  void increment(std::size_t v) {
    ++degrees_[v];
    ++total_ends_;
    if (use_tree_) tree_.add(v, 1.0);
  }

  /// Vertex index in [0, k) picked with probability (deg_v - alpha) / total.
  std::size_t pick(double u01) const {
    const double target = u01 * total_weight();
    if (use_tree_) return tree_.find(target);
    double acc = 0.0;
    for (std::size_t v = 0; v + 1 < degrees_.size(); ++v) {
      acc += static_cast<double>(degrees_[v]) - alpha_;
      if (target < acc) return v;
    }
    return degrees_.size() - 1;
  }

  double total_weight() const {
    return static_cast<double>(total_ends_) -
           alpha_ * static_cast<double>(degrees_.size());
  }

  std::size_t num_vertices() const { return degrees_.size(); }
  const std::vector<std::int64_t>& degrees() const { return degrees_; }

 private:
  double alpha_;
  std::size_t threshold_;
  std::vector<std::int64_t> degrees_;
  detail::fenwick_tree tree_;
  std::int64_t total_ends_ = 0;
  bool use_tree_ = false;
};

struct sampler_output {
  label_sequence labels;
  arrival_schedule schedule;
  std::optional<stick_weights> psi;
};

/// Sequential degree-biased sampler: L_n = k when n = T_k, otherwise L_n is
/// an existing vertex picked with probability (deg - alpha) / (n - 1 - alpha k),
/// degrees updating after every single end.
inline sampler_output sample_db(const model_params& params,
                                const arrival_schedule& schedule,
                                std::int64_t n_ends, rng& r) {
  if (n_ends < 1) throw bad_params("sample_db: n_ends >= 1");
  degree_biased_picker picker(params.alpha);
  std::vector<label_t> labels;
  labels.reserve(static_cast<std::size_t>(n_ends));
  label_t k = 0;
  for (step_t n = 1; n <= n_ends; ++n) {
    if (n == schedule.time(k + 1)) {
      ++k;
      picker.add_vertex();
      labels.push_back(k);
    } else {
      if (k == 0) throw schedule_exhausted("no vertex available before time 1");
      const std::size_t v = picker.pick(r.uniform());
      picker.increment(v);
      labels.push_back(static_cast<label_t>(v + 1));
    }
  }
  sampler_output out;
  out.labels = label_sequence::trusted_from_labels(std::move(labels));
  out.schedule = schedule;
  return out;
}

/// Stick-breaking sampler. Draws psi_j ~ Beta(1 - alpha, t_j - 1 - (j-1)alpha)
/// at each arrival and assigns non-arrival ends by locating a uniform in the
/// interval partition induced by the tail products W_{j,k}.
///
/// Internally keeps prefix products a_j = prod_{l<=j} (1 - psi_l) (a_1 = 1),
/// so W_{j,k} = a_k / a_j and an arrival costs O(1); each draw is a binary
/// search over the a grid. Uniforms are consumed only at non-arrival steps.
inline sampler_output sample_stick_breaking(const model_params& params,
                                            const arrival_schedule& schedule,
                                            std::int64_t n_ends, rng& r) {
  if (n_ends < 1) throw bad_params("sample_stick_breaking: n_ends >= 1");
  std::vector<double> psi{1.0};
  std::vector<double> prefix{1.0};  // prefix[j-1] = a_j
  std::vector<label_t> labels;
  labels.reserve(static_cast<std::size_t>(n_ends));
  label_t k = 0;
  for (step_t n = 1; n <= n_ends; ++n) {
    if (n == schedule.time(k + 1)) {
      ++k;
      if (k > 1) {
        const double b = static_cast<double>(schedule.time(k)) - 1.0 -
                         (static_cast<double>(k) - 1.0) * params.alpha;
        if (!(b > 0.0))
          throw bad_params("stick variable " + std::to_string(k) +
                           " has nonpositive beta parameter");
        psi.push_back(r.beta(1.0 - params.alpha, b));
        prefix.push_back(prefix.back() * (1.0 - psi.back()));
      }
      labels.push_back(k);
    } else {
      if (k == 0) throw schedule_exhausted("no vertex available before time 1");
      const double u = r.uniform();
      const double ak = prefix.back();
      // Smallest j with W_{j,k} = a_k / a_j > u; j = k always qualifies.
      auto it = std::partition_point(
          prefix.begin(), prefix.end(),
          [&](double aj) { return !(ak / aj > u); });
      labels.push_back(static_cast<label_t>(it - prefix.begin()) + 1);
    }
  }
  sampler_output out;
  out.labels = label_sequence::trusted_from_labels(std::move(labels));
  out.schedule = schedule;
  out.psi = stick_weights{std::move(psi)};
  return out;
}

/// Gamma-ratio representation of the stick variables: psi'_j is the j-th
/// fresh Gamma(1 - alpha) propensity over the running total of all
/// propensities plus head-start terms Gamma(delta - 1) (zero when delta = 1).
/// Jointly equal in law to the independent Beta draws above.
inline std::vector<double> sample_psi_recursion(
    const model_params& params, const std::vector<std::int64_t>& interarrivals,
    rng& r) {
  for (std::int64_t d : interarrivals)
    if (d < 1) throw bad_params("interarrivals must be >= 1");
  std::vector<double> psi;
  psi.reserve(interarrivals.size() + 1);
  double g = r.gamma(1.0 - params.alpha);
  double denom = g;
  psi.push_back(1.0);  // g / denom with empty history
  for (std::int64_t d : interarrivals) {
    denom += r.gamma(static_cast<double>(d - 1));
    g = r.gamma(1.0 - params.alpha);
    denom += g;
    psi.push_back(g / denom);
  }
  return psi;
}

}  // namespace atgraph
