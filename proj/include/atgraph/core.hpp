#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace atgraph {

using label_t = std::int64_t;
using step_t = std::int64_t;

/// Sentinel for arrival times of vertices that never appear.
inline constexpr step_t infinite_time = std::numeric_limits<step_t>::max();

/// Degree-bias offset. Valid range is alpha < 1.
struct model_params {
  double alpha = 0.0;

  model_params() = default;
  explicit model_params(double a) : alpha(a) {
    if (!std::isfinite(a) || !(a < 1.0))
      throw bad_params("alpha must be finite and < 1");
  }
};

/// A multigraph as the flat sequence of edge-end vertex labels. Consecutive
/// pairs (l_{2n-1}, l_{2n}) are undirected edges; vertices are numbered 1, 2,
/// ... in order of first appearance, so the first label is always 1 and no
/// label may exceed the running maximum by more than one.
class label_sequence {
 public:
  label_sequence() = default;

  static label_sequence from_labels(std::vector<label_t> ls) {
    validate(ls);
    return label_sequence(std::move(ls), trusted{});
  }

  /// Wraps labels produced by a sampler that maintains the invariants itself.
  static label_sequence trusted_from_labels(std::vector<label_t> ls) {
    return label_sequence(std::move(ls), trusted{});
  }

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  label_t operator[](std::size_t i) const { return labels_[i]; }
  const std::vector<label_t>& labels() const { return labels_; }

  label_t num_vertices() const {
    return labels_.empty() ? 0 : *std::max_element(labels_.begin(), labels_.end());
  }

  bool operator==(const label_sequence& o) const { return labels_ == o.labels_; }

 private:
  struct trusted {};
  label_sequence(std::vector<label_t> ls, trusted) : labels_(std::move(ls)) {}

  static void validate(const std::vector<label_t>& ls) {
    if (ls.empty()) return;
    if (ls[0] != 1) throw malformed_sequence("first label must be 1", 0);
    label_t max_seen = 1;
    for (std::size_t i = 1; i < ls.size(); ++i) {
      if (ls[i] < 1 || ls[i] > max_seen + 1)
        throw malformed_sequence("label breaks order of appearance", i);
      max_seen = std::max(max_seen, ls[i]);
    }
  }

  std::vector<label_t> labels_;
};

/// Degree/arrival summary of a label sequence. Keeps the end list itself (no
/// adjacency structure); degrees and arrival times are derived.
struct multigraph_view {
  label_sequence labels;
  std::vector<std::int64_t> degrees;     // degrees[k-1] = occurrences of label k
  std::vector<step_t> arrival_times;     // arrival_times[k-1] = first index of k, 1-based
  label_t num_vertices = 0;
  std::int64_t num_edge_ends = 0;
};

inline multigraph_view multigraph_from_labels(const label_sequence& ls) {
  multigraph_view v;
  v.labels = ls;
  v.num_edge_ends = static_cast<std::int64_t>(ls.size());
  v.num_vertices = ls.num_vertices();
  v.degrees.assign(static_cast<std::size_t>(v.num_vertices), 0);
  v.arrival_times.assign(static_cast<std::size_t>(v.num_vertices), 0);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const auto k = static_cast<std::size_t>(ls[i] - 1);
    if (v.degrees[k] == 0) v.arrival_times[k] = static_cast<step_t>(i + 1);
    ++v.degrees[k];
  }
  return v;
}

/// A strictly increasing sequence of vertex arrival times over N plus an
/// implicit all-infinity tail. The first time is always 1.
class arrival_schedule {
 public:
  arrival_schedule() = default;

  /// Validates a raw time list. infinite_time entries are allowed only as a
  /// suffix and are stripped; everything after the stored prefix is infinite.
  static arrival_schedule from_times(std::vector<step_t> raw,
                                     std::string provenance = "fixed") {
    bool seen_inf = false;
    std::vector<step_t> finite;
    finite.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == infinite_time) {
        seen_inf = true;
        continue;
      }
      if (seen_inf)
        throw bad_schedule("finite arrival time after an infinite one");
      if (raw[i] < 1) throw bad_schedule("arrival times must be >= 1");
      if (finite.empty()) {
        if (raw[i] != 1) throw bad_schedule("first arrival time must be 1");
      } else if (raw[i] <= finite.back()) {
        throw bad_schedule("arrival times must be strictly increasing");
      }
      finite.push_back(raw[i]);
    }
    if (finite.empty()) throw bad_schedule("schedule must contain time 1");
    return arrival_schedule(std::move(finite), std::move(provenance));
  }

  /// Arrival time of vertex k (1-based); infinite beyond the realized prefix.
  step_t time(label_t k) const {
    if (k < 1) throw bad_schedule("vertex index must be >= 1");
    const auto i = static_cast<std::size_t>(k - 1);
    return i < finite_.size() ? finite_[i] : infinite_time;
  }

  std::int64_t num_finite() const {
    return static_cast<std::int64_t>(finite_.size());
  }

  /// Number of vertices that have arrived by step n.
  label_t vertices_by(step_t n) const {
    auto it = std::upper_bound(finite_.begin(), finite_.end(), n);
    return static_cast<label_t>(it - finite_.begin());
  }

  /// Membership in the even-arrivals class (times even for k > 1); such
  /// schedules make every edge-complete prefix graph connected.
  bool in_t2() const {
    for (std::size_t i = 1; i < finite_.size(); ++i)
      if (finite_[i] % 2 != 0) return false;
    return true;
  }

  const std::vector<step_t>& finite_times() const { return finite_; }
  const std::string& provenance() const { return provenance_; }

  std::vector<step_t> interarrivals() const {
    std::vector<step_t> d;
    for (std::size_t i = 1; i < finite_.size(); ++i)
      d.push_back(finite_[i] - finite_[i - 1]);
    return d;
  }

 private:
  arrival_schedule(std::vector<step_t> finite, std::string provenance)
      : finite_(std::move(finite)), provenance_(std::move(provenance)) {}

  std::vector<step_t> finite_{};
  std::string provenance_ = "fixed";
};

inline arrival_schedule validate_schedule(std::vector<step_t> raw,
                                          std::string provenance = "fixed") {
  return arrival_schedule::from_times(std::move(raw), std::move(provenance));
}

/// Realized stick variables. psi[j-1] holds the j-th variable; the first is
/// identically 1. w(j, k) is the tail product over (1 - psi) for j < l <= k,
/// which equals the cumulative-interval form because psi_1 = 1.
struct stick_weights {
  std::vector<double> psi;

  double w(std::size_t j, std::size_t k) const {
    if (j < 1 || k < j || k > psi.size()) throw bad_params("w(j,k) out of range");
    double p = 1.0;
    for (std::size_t l = j + 1; l <= k; ++l) p *= 1.0 - psi[l - 1];
    return p;
  }
};

enum class report_kind { statistical, exact };

/// Outcome of one validation: statistical tests pass when the p-value exceeds
/// the threshold, exact checks when the error norm stays below it.
struct test_report {
  std::string name;
  report_kind kind = report_kind::statistical;
  double statistic = 0.0;
  double p_value_or_error = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::uint64_t seed = 0;
  std::int64_t samples = 0;
  std::string notes;
};

inline test_report make_statistical_report(std::string name, double statistic,
                                           double p_value, double threshold,
                                           std::uint64_t seed,
                                           std::int64_t samples,
                                           std::string notes = "") {
  test_report r;
  r.name = std::move(name);
  r.kind = report_kind::statistical;
  r.statistic = statistic;
  r.p_value_or_error = p_value;
  r.threshold = threshold;
  r.passed = p_value > threshold;
  r.seed = seed;
  r.samples = samples;
  r.notes = std::move(notes);
  return r;
}

inline test_report make_exact_report(std::string name, double error_norm,
                                     double threshold, std::uint64_t seed,
                                     std::int64_t samples,
                                     std::string notes = "") {
  test_report r;
  r.name = std::move(name);
  r.kind = report_kind::exact;
  r.statistic = error_norm;
  r.p_value_or_error = error_norm;
  r.threshold = threshold;
  r.passed = error_norm < threshold;
  r.seed = seed;
  r.samples = samples;
  r.notes = std::move(notes);
  return r;
}

namespace detail {

class union_find {
 public:
  explicit union_find(std::size_t n = 0) { reset(n); }

  void reset(std::size_t n) {
    parent_.resize(n);
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    rank_.assign(n, 0);
    components_ = n;
  }

  void add_node() {
    parent_.push_back(parent_.size());
    rank_.push_back(0);
    ++components_;
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    --components_;
  }

  std::size_t components() const { return components_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_;
  std::size_t components_ = 0;
};

}  // namespace detail

/// True when every edge-complete prefix (first m edges, for all m) induces a
/// connected graph on the vertices seen so far.
inline bool all_edge_prefixes_connected(const label_sequence& ls) {
  detail::union_find uf;
  label_t seen = 0;
  const auto& l = ls.labels();
  for (std::size_t e = 0; e + 1 < l.size(); e += 2) {
    for (label_t v : {l[e], l[e + 1]})
      while (seen < v) {
        uf.add_node();
        ++seen;
      }
    uf.unite(static_cast<std::size_t>(l[e] - 1),
             static_cast<std::size_t>(l[e + 1] - 1));
    if (uf.components() != 1) return false;
  }
  return true;
}

}  // namespace atgraph
