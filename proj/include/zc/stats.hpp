#pragma once
// Statistical helpers shared by the estimators, verify suites and tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "zc/util.hpp"

namespace zc::stats {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe r;
  r.n = xs.size();
  if (r.n == 0) return r;
  util::KahanAcc s1, s2;
  for (const double x : xs) s1.add(x);
  r.mean = s1.value() / static_cast<double>(r.n);
  for (const double x : xs) s2.add((x - r.mean) * (x - r.mean));
  if (r.n > 1)
    r.se = std::sqrt(s2.value() / (static_cast<double>(r.n) * (static_cast<double>(r.n) - 1.0)));
  return r;
}

struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
};

inline OlsFit ols(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("ols: need matching xs/ys with >= 2 points");
  const std::size_t n = xs.size();
  double xbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xbar += xs[i];
    ybar += ys[i];
  }
  xbar /= static_cast<double>(n);
  ybar /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
  }
  if (sxx == 0.0) throw std::invalid_argument("ols: degenerate abscissa");
  OlsFit f;
  f.slope = sxy / sxx;
  f.intercept = ybar - f.slope * xbar;
  return f;
}

// p in [0,1]; xs must be sorted ascending. Linear interpolation between order
// statistics.
inline double percentile_sorted(const std::vector<double>& xs, double p) {
  if (xs.empty()) throw std::invalid_argument("percentile of empty sample");
  if (xs.size() == 1) return xs[0];
  const double pos = p * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, xs.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return xs[lo] * (1.0 - frac) + xs[hi] * frac;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

struct Wilson {
  double lo = 0.0;
  double hi = 0.0;
};

// 95% Wilson score interval for a binomial fraction.
inline Wilson wilson95(std::size_t hits, std::size_t total) {
  if (total == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double n = static_cast<double>(total);
  const double phat = static_cast<double>(hits) / n;
  const double z2n = z * z / n;
  const double denom = 1.0 + z2n;
  const double center = (phat + 0.5 * z2n) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / n + 0.25 * z2n / n) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

// Two-sample Kolmogorov-Smirnov D statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    const double fa = static_cast<double>(i) / static_cast<double>(a.size());
    const double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

// Asymptotic KS rejection at level alpha: D > c(alpha) * sqrt((n+m)/(n m)).
inline bool ks_two_sample_reject(const std::vector<double>& a,
                                 const std::vector<double>& b, double alpha) {
  const double d = ks_two_sample(a, b);
  const double c = std::sqrt(-0.5 * std::log(0.5 * alpha));
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(b.size());
  return d > c * std::sqrt((n + m) / (n * m));
}

// One-sample KS statistic against a centered normal with given sd.
inline double ks_one_sample_normal(std::vector<double> xs, double sd) {
  if (xs.empty() || !(sd > 0.0)) throw std::invalid_argument("ks: bad input");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = normal_cdf(xs[i] / sd);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(std::abs(f - lo), std::abs(hi - f)));
  }
  return d;
}

inline bool ks_one_sample_normal_reject(const std::vector<double>& xs, double sd,
                                        double alpha) {
  const double d = ks_one_sample_normal(xs, sd);
  const double c = std::sqrt(-0.5 * std::log(0.5 * alpha));
  return d > c / std::sqrt(static_cast<double>(xs.size()));
}

}  // namespace zc::stats
