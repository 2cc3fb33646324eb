#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "meanlab/summation.hpp"

namespace meanlab {

/// Standard normal CDF through the complementary error function.
/// Phi(0) = 0.5 exactly and Phi(-x) + Phi(x) = 1 to machine precision.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

/// Inverse standard normal CDF by bisection on normal_cdf; no second
/// approximation surface. The bracket [-9.5, 9.5] covers every p
/// representable as a 53-bit uniform draw.
inline double normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::invalid_argument("normal_quantile: p must lie in (0, 1)");
  }
  double lo = -9.5, hi = 9.5;
  for (int i = 0; i < 60 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (normal_cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Two-sided one-sample Kolmogorov-Smirnov distance between the empirical
/// CDF of `values` and the theoretical CDF.
inline double ks_statistic(std::span<const double> values,
                           const std::function<double(double)>& cdf) {
  if (values.empty()) {
    throw std::invalid_argument("ks_statistic: empty input");
  }
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("ks_statistic: values must be finite");
    }
  }
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double below = f - static_cast<double>(i) / n;
    const double above = static_cast<double>(i + 1) / n - f;
    d = std::max({d, below, above});
  }
  return d;
}

inline double mean_of(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean_of: empty input");
  return pairwise_sum(xs) / static_cast<double>(xs.size());
}

/// Unbiased sample variance.
inline double sample_variance_of(std::span<const double> xs) {
  if (xs.size() < 2) {
    throw std::invalid_argument("sample_variance_of: need at least 2 values");
  }
  const double m = mean_of(xs);
  const double ss = pairwise_sum(xs, [m](double x) {
    const double d = x - m;
    return d * d;
  });
  return ss / static_cast<double>(xs.size() - 1);
}

}  // namespace meanlab
