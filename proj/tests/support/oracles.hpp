#pragma once

// Reference implementations used only by the tests. They are written from the
// textbook definitions and share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<long>>;

/// kappa_w = 1 - sum(v * observed) / sum(v * expected) with disagreement
/// weights v = |i-j|/(n-1) or its square. Cells are proportions.
inline double direct_weighted_kappa(const Matrix& m, bool quadratic) {
  const std::size_t n = m.size();
  double total = 0.0;
  for (const auto& row : m)
    for (long c : row) total += static_cast<double>(c);
  std::vector<double> rows(n, 0.0), cols(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      rows[i] += static_cast<double>(m[i][j]) / total;
      cols[j] += static_cast<double>(m[i][j]) / total;
    }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double v = std::abs(static_cast<double>(i) - static_cast<double>(j)) / static_cast<double>(n - 1);
      if (quadratic) v *= v;
      num += v * static_cast<double>(m[i][j]) / total;
      den += v * rows[i] * cols[j];
    }
  }
  return 1.0 - num / den;
}

/// Two-sided exact signed-rank p by listing every sign assignment. Requires
/// distinct non-zero |d|.
inline double enumerate_wilcoxon_p(const std::vector<double>& d) {
  std::vector<double> mags;
  for (double x : d)
    if (x != 0.0) mags.push_back(std::abs(x));
  std::vector<double> sorted = mags;
  std::sort(sorted.begin(), sorted.end());
  auto rank_of = [&](double v) {
    return static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin()) + 1;
  };
  int observed = 0;
  for (double x : d)
    if (x > 0.0) observed += rank_of(x);
  const int n = static_cast<int>(mags.size());
  const std::uint64_t count = std::uint64_t{1} << n;
  std::uint64_t le = 0, ge = 0;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    int w = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (std::uint64_t{1} << i)) w += i + 1;
    if (w <= observed) ++le;
    if (w >= observed) ++ge;
  }
  const double p = 2.0 * static_cast<double>(std::min(le, ge)) / static_cast<double>(count);
  return std::min(1.0, p);
}

/// Median by full sort, averaging the middle pair for even sizes.
inline std::optional<double> sort_median(std::vector<double> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

/// Expected staircase result for an observer who is right exactly when the
/// level's disparity is at least theta: the smallest such level, the finest
/// level when theta is below it, nothing (OL) when theta exceeds the coarsest.
inline std::optional<double> expected_staircase(const std::vector<double>& arcsec_finest_first,
                                                double theta) {
  for (double a : arcsec_finest_first)
    if (a >= theta) return a;
  return std::nullopt;
}

}  // namespace oracle
