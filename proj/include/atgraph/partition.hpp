#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "core.hpp"
#include "rng.hpp"
#include "samplers.hpp"

namespace atgraph {

/// A partition of {1..n} in block-label form: element i carries the label of
/// its block, blocks numbered in order of appearance. The encoding is the
/// same as a label sequence, which is what makes the graph map a bijection.
class partition {
 public:
  partition() = default;

  static partition from_labels(label_sequence ls) {
    return partition(std::move(ls));
  }

  static partition from_blocks(const std::vector<std::vector<std::int64_t>>& blocks) {
    std::int64_t n = 0;
    for (const auto& b : blocks) {
      if (b.empty()) throw inconsistent_input("empty block");
      n += static_cast<std::int64_t>(b.size());
    }
    std::vector<label_t> ls(static_cast<std::size_t>(n), 0);
    for (std::size_t k = 0; k < blocks.size(); ++k)
      for (std::int64_t e : blocks[k]) {
        if (e < 1 || e > n || ls[static_cast<std::size_t>(e - 1)] != 0)
          throw inconsistent_input("blocks do not partition {1..n}");
        ls[static_cast<std::size_t>(e - 1)] = static_cast<label_t>(k + 1);
      }
    return partition(label_sequence::from_labels(std::move(ls)));
  }

  const label_sequence& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  label_t num_blocks() const { return labels_.num_vertices(); }

  std::vector<std::vector<std::int64_t>> blocks() const {
    std::vector<std::vector<std::int64_t>> bs(
        static_cast<std::size_t>(labels_.num_vertices()));
    for (std::size_t i = 0; i < labels_.size(); ++i)
      bs[static_cast<std::size_t>(labels_[i] - 1)].push_back(
          static_cast<std::int64_t>(i + 1));
    return bs;
  }

  std::vector<std::int64_t> block_sizes() const {
    std::vector<std::int64_t> sz(static_cast<std::size_t>(labels_.num_vertices()), 0);
    for (std::size_t i = 0; i < labels_.size(); ++i)
      ++sz[static_cast<std::size_t>(labels_[i] - 1)];
    return sz;
  }

  bool operator==(const partition& o) const { return labels_ == o.labels_; }

 private:
  explicit partition(label_sequence ls) : labels_(std::move(ls)) {}
  label_sequence labels_;
};

/// Partition -> multigraph: reinterpret block labels as edge ends.
inline label_sequence phi(const partition& p) { return p.labels(); }

/// Multigraph -> partition; exact inverse of phi.
inline partition phi_inverse(const label_sequence& ls) {
  return partition::from_labels(ls);
}

/// Smallest element of each block; equals the graph's arrival times.
inline std::vector<step_t> record_indices(const partition& p) {
  std::vector<step_t> rec(static_cast<std::size_t>(p.num_blocks()), 0);
  const auto& ls = p.labels();
  for (std::size_t i = 0; i < ls.size(); ++i) {
    auto& r = rec[static_cast<std::size_t>(ls[i] - 1)];
    if (r == 0) r = static_cast<step_t>(i + 1);
  }
  return rec;
}

/// The urn view of the same process: at arrival times add a ball of a new
/// color, otherwise reinforce color j with weight |B_j| - alpha. Implemented
/// on top of the one tested sampler rather than as a second code path.
inline partition urn_scheme(const model_params& params,
                            const arrival_schedule& schedule, std::int64_t n,
                            rng& r) {
  return phi_inverse(sample_db(params, schedule, n, r).labels);
}

/// Visits every partition of {1..n} (as restricted-growth label sequences).
inline void enumerate_partitions(std::int64_t n,
                                 const std::function<void(const partition&)>& visit) {
  std::vector<label_t> work(static_cast<std::size_t>(n));
  std::function<void(std::int64_t, label_t)> descend = [&](std::int64_t i,
                                                           label_t k) {
    if (i > n) {
      visit(partition::from_labels(label_sequence::trusted_from_labels(work)));
      return;
    }
    for (label_t v = 1; v <= k + 1; ++v) {
      work[static_cast<std::size_t>(i - 1)] = v;
      descend(i + 1, std::max(k, v));
    }
  };
  if (n == 0) return;
  descend(1, 0);
}

struct coherence_result {
  double max_violation = 0.0;
  std::int64_t partitions_checked = 0;
};

/// Checks P(pi) = sum over single-element appends of P(pi + n), where prob_fn
/// returns the probability of a finite partition (zero for partitions the
/// underlying law cannot produce). Enumerates all partitions of {1..n-1}.
inline coherence_result check_coherence(
    const std::function<double(const partition&)>& prob_fn, std::int64_t n,
    std::int64_t enumeration_cap = 10) {
  if (n < 2) throw bad_params("coherence check needs n >= 2");
  if (n > enumeration_cap) throw cap_exceeded("coherence: n exceeds the cap");
  coherence_result res;
  enumerate_partitions(n - 1, [&](const partition& p) {
    const double lhs = prob_fn(p);
    std::vector<label_t> ls = p.labels().labels();
    const label_t k = p.num_blocks();
    double rhs = 0.0;
    ls.push_back(0);
    for (label_t j = 1; j <= k + 1; ++j) {
      ls.back() = j;
      rhs += prob_fn(partition::from_labels(label_sequence::trusted_from_labels(ls)));
    }
    res.max_violation = std::max(res.max_violation, std::fabs(lhs - rhs));
    ++res.partitions_checked;
  });
  return res;
}

}  // namespace atgraph
