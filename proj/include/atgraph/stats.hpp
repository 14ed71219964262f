#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "errors.hpp"
#include "special.hpp"

namespace atgraph {

struct test_result {
  double statistic = 0.0;
  double p_value = 1.0;
  std::int64_t n_lhs = 0;
  std::int64_t n_rhs = 0;
};

/// Two-sample Kolmogorov-Smirnov with the asymptotic p-value.
inline test_result ks_two_sample(std::vector<double> xs, std::vector<double> ys) {
  if (xs.empty() || ys.empty()) throw empty_sample("ks_two_sample: empty input");
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const double nx = static_cast<double>(xs.size());
  const double ny = static_cast<double>(ys.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < xs.size() && j < ys.size()) {
    const double v = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] <= v) ++i;
    while (j < ys.size() && ys[j] <= v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / nx -
                              static_cast<double>(j) / ny));
  }
  const double ne = std::sqrt(nx * ny / (nx + ny));
  const double lambda = (ne + 0.12 + 0.11 / ne) * d;
  test_result r;
  r.statistic = d;
  r.p_value = kolmogorov_sf(lambda);
  r.n_lhs = static_cast<std::int64_t>(xs.size());
  r.n_rhs = static_cast<std::int64_t>(ys.size());
  return r;
}

namespace detail {

// Pools trailing cells until every retained cell has expected count >= 5.
// Returns the retained cell count; counts/expected are compacted in place.
inline std::size_t pool_tail_cells(std::vector<double>& observed,
                                   std::vector<double>& expected,
                                   double min_expected = 5.0) {
  std::size_t m = observed.size();
  while (m > 1) {
    bool any_small = false;
    for (std::size_t c = 0; c < m; ++c)
      if (expected[c] < min_expected) any_small = true;
    if (!any_small) break;
    observed[m - 2] += observed[m - 1];
    expected[m - 2] += expected[m - 1];
    --m;
  }
  observed.resize(m);
  expected.resize(m);
  return m;
}

}  // namespace detail

/// Pearson goodness-of-fit of observed counts against a pmf. The pmf may sum
/// to less than one; the remainder becomes an implicit overflow cell holding
/// the leftover counts. Cells with expected count below 5 are pooled from the
/// tail.
inline test_result chi_square_gof(const std::vector<std::int64_t>& counts,
                                  const std::vector<double>& pmf) {
  if (counts.size() != pmf.size())
    throw length_mismatch("chi_square_gof: counts and pmf sizes differ");
  if (counts.empty()) throw degenerate_support("chi_square_gof: no cells");
  std::int64_t total = 0;
  for (std::int64_t c : counts) total += c;
  double pmf_sum = 0.0;
  for (double p : pmf) {
    if (p < 0.0) throw degenerate_support("chi_square_gof: negative pmf entry");
    pmf_sum += p;
  }
  if (pmf_sum > 1.0 + 1e-9)
    throw degenerate_support("chi_square_gof: pmf sums above 1");

  std::vector<double> observed(counts.begin(), counts.end());
  std::vector<double> expected(pmf.size());
  for (std::size_t c = 0; c < pmf.size(); ++c)
    expected[c] = static_cast<double>(total) * pmf[c];
  const double leftover = 1.0 - pmf_sum;
  if (leftover > 1e-12) {
    observed.push_back(0.0);  // all supplied counts are in-support
    expected.push_back(static_cast<double>(total) * leftover);
  }
  const std::size_t m = detail::pool_tail_cells(observed, expected);
  if (m < 2) throw degenerate_support("chi_square_gof: fewer than 2 cells left");

  double stat = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    const double diff = observed[c] - expected[c];
    stat += diff * diff / expected[c];
  }
  test_result r;
  r.statistic = stat;
  r.p_value = chi_square_sf(stat, static_cast<double>(m - 1));
  r.n_lhs = total;
  r.n_rhs = 0;
  return r;
}

/// Chi-square homogeneity test of two count vectors over the same cells.
inline test_result chi_square_two_sample(const std::vector<std::int64_t>& a,
                                         const std::vector<std::int64_t>& b) {
  if (a.size() != b.size())
    throw length_mismatch("chi_square_two_sample: cell counts differ");
  if (a.empty()) throw degenerate_support("chi_square_two_sample: no cells");
  const double na = static_cast<double>(std::accumulate(a.begin(), a.end(), std::int64_t{0}));
  const double nb = static_cast<double>(std::accumulate(b.begin(), b.end(), std::int64_t{0}));
  if (na == 0.0 || nb == 0.0) throw empty_sample("chi_square_two_sample: empty sample");

  // Pool on the pooled-expected scale, keeping both observed rows aligned.
  std::vector<double> oa(a.begin(), a.end()), ob(b.begin(), b.end());
  std::size_t m = oa.size();
  auto expected_small = [&](std::size_t c) {
    const double pooled = (oa[c] + ob[c]) / (na + nb);
    return pooled * na < 5.0 || pooled * nb < 5.0;
  };
  while (m > 1) {
    bool any = false;
    for (std::size_t c = 0; c < m; ++c)
      if (expected_small(c)) any = true;
    if (!any) break;
    oa[m - 2] += oa[m - 1];
    ob[m - 2] += ob[m - 1];
    --m;
  }
  oa.resize(m);
  ob.resize(m);
  if (m < 2) throw degenerate_support("chi_square_two_sample: fewer than 2 cells");

  double stat = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    const double pooled = (oa[c] + ob[c]) / (na + nb);
    const double ea = pooled * na;
    const double eb = pooled * nb;
    stat += (oa[c] - ea) * (oa[c] - ea) / ea + (ob[c] - eb) * (ob[c] - eb) / eb;
  }
  test_result r;
  r.statistic = stat;
  r.p_value = chi_square_sf(stat, static_cast<double>(m - 1));
  r.n_lhs = static_cast<std::int64_t>(na);
  r.n_rhs = static_cast<std::int64_t>(nb);
  return r;
}

struct tv_result {
  double distance = 0.0;
  double lhs_tail = 0.0;  // mass each pmf puts outside the compared support
  double rhs_tail = 0.0;
};

/// Total variation over the shared support; tail mass is reported, not folded
/// into the distance.
inline tv_result tv_distance(const std::vector<double>& a,
                             const std::vector<double>& b) {
  if (a.size() != b.size()) throw length_mismatch("tv_distance: sizes differ");
  tv_result r;
  double sa = 0.0, sb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0.0 || b[i] < 0.0) throw degenerate_support("tv_distance: negative mass");
    r.distance += std::fabs(a[i] - b[i]);
    sa += a[i];
    sb += b[i];
  }
  r.distance *= 0.5;
  r.lhs_tail = std::max(0.0, 1.0 - sa);
  r.rhs_tail = std::max(0.0, 1.0 - sb);
  return r;
}

namespace detail {

inline std::vector<double> average_ranks(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> rank(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && xs[idx[j + 1]] == xs[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) rank[idx[t]] = avg;
    i = j + 1;
  }
  return rank;
}

}  // namespace detail

/// Spearman correlation (Pearson on average ranks); independence diagnostic.
inline double rank_correlation(const std::vector<double>& xs,
                               const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw length_mismatch("rank_correlation: sizes differ");
  if (xs.size() < 2) throw length_mismatch("rank_correlation: need >= 2 pairs");
  const std::vector<double> rx = detail::average_ranks(xs);
  const std::vector<double> ry = detail::average_ranks(ys);
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = rx[i] - mx;
    const double dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw degenerate_support("rank_correlation: constant input");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace atgraph
