#ifndef TAILNET_TESTS_STAT_TEST_HPP
#define TAILNET_TESTS_STAT_TEST_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "tailnet/common.hpp"

// Shared statistical helpers for the test suites: Kolmogorov-Smirnov
// statistics, asymptotic critical values, and an O(n log n) Kendall tau.
namespace stat_test {

// Asymptotic Kolmogorov critical values: P(sqrt(n) D > k) = alpha.
inline constexpr double kKs01 = 1.62762;
inline constexpr double kKs05 = 1.35810;

inline double ks_statistic(std::vector<double> xs,
                           const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, std::fabs((i + 1) / n - f));
    d = std::max(d, std::fabs(f - i / n));
  }
  return d;
}

inline bool ks_pass_1pct(std::vector<double> xs,
                         const std::function<double(double)>& cdf) {
  const double n = static_cast<double>(xs.size());
  return ks_statistic(std::move(xs), cdf) < kKs01 / std::sqrt(n);
}

inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) ++i; else ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / a.size() -
                              static_cast<double>(j) / b.size()));
  }
  return d;
}

inline bool ks_two_sample_pass_1pct(std::vector<double> a, std::vector<double> b) {
  const double m = static_cast<double>(a.size());
  const double n = static_cast<double>(b.size());
  const double d = ks_two_sample(std::move(a), std::move(b));
  return d < kKs01 * std::sqrt((m + n) / (m * n));
}

inline std::vector<double> col(const tailnet::PairMatrix& m, int j) {
  return {m.col(j).data(), m.col(j).data() + m.rows()};
}

// Kendall tau via merge-sort inversion counting (no ties assumed).
inline double kendall_tau(const tailnet::PairMatrix& uv) {
  const std::size_t n = static_cast<std::size_t>(uv.rows());
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return uv(a, 0) < uv(b, 0); });
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = uv(idx[i], 1);

  std::vector<double> buf(n);
  std::size_t inversions = 0;
  const std::function<void(std::size_t, std::size_t)> sort_count =
      [&](std::size_t lo, std::size_t hi) {
        if (hi - lo < 2) return;
        const std::size_t mid = lo + (hi - lo) / 2;
        sort_count(lo, mid);
        sort_count(mid, hi);
        std::size_t i = lo, j = mid, k = lo;
        while (i < mid && j < hi) {
          if (y[i] <= y[j]) buf[k++] = y[i++];
          else {
            inversions += mid - i;
            buf[k++] = y[j++];
          }
        }
        while (i < mid) buf[k++] = y[i++];
        while (j < hi) buf[k++] = y[j++];
        std::copy(buf.begin() + lo, buf.begin() + hi, y.begin() + lo);
      };
  sort_count(0, n);
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return 1.0 - 2.0 * static_cast<double>(inversions) / pairs;
}

// Graded 1D partition of [lo, hi]: geometric refinement toward both ends,
// which integrates edge singularities that quadrant-adaptive 2D rules cannot
// resolve efficiently.
inline std::vector<double> graded_breaks(double lo, double hi, double min_step_frac) {
  std::vector<double> b{lo};
  const double span = hi - lo;
  for (double e = min_step_frac; e < 0.4; e *= 6.0) b.push_back(lo + e * span);
  b.push_back(lo + 0.5 * span);
  for (std::size_t i = b.size() - 2; i > 0; --i) b.push_back(hi - (b[i] - lo));
  b.push_back(hi);
  return b;
}

inline double pearson_corr(const tailnet::PairMatrix& m) {
  const double mx = m.col(0).mean();
  const double my = m.col(1).mean();
  const auto cx = (m.col(0).array() - mx).eval();
  const auto cy = (m.col(1).array() - my).eval();
  return (cx * cy).sum() / std::sqrt(cx.square().sum() * cy.square().sum());
}

}  // namespace stat_test

#endif  // TAILNET_TESTS_STAT_TEST_HPP
