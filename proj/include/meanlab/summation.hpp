#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

namespace meanlab {

namespace detail {

inline constexpr std::size_t kPairwiseBlock = 32;

template <class F>
double pairwise_sum_impl(std::span<const double> xs, const F& f) {
  if (xs.size() <= kPairwiseBlock) {
    double s = 0.0;
    for (double x : xs) s += f(x);
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum_impl(xs.first(half), f) +
         pairwise_sum_impl(xs.subspan(half), f);
}

}  // namespace detail

/// Pairwise (tree) summation over a fixed left-to-right element order.
/// The grouping depends only on the input length, so results are
/// reproducible for identical inputs.
template <class F>
double pairwise_sum(std::span<const double> xs, const F& f) {
  return detail::pairwise_sum_impl(xs, f);
}

inline double pairwise_sum(std::span<const double> xs) {
  return detail::pairwise_sum_impl(xs, [](double x) { return x; });
}

/// log(sum_i exp(a_i)) with max shift. Returns -inf on empty input.
inline double log_sum_exp(std::span<const double> a) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : a) m = std::max(m, v);
  if (!std::isfinite(m)) return m;
  const double s = pairwise_sum(a, [m](double v) { return std::exp(v - m); });
  return m + std::log(s);
}

/// log(sum_i exp(scale * a_i)) without materializing the scaled array.
inline double log_sum_exp_scaled(std::span<const double> a, double scale) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : a) m = std::max(m, scale * v);
  if (!std::isfinite(m)) return m;
  const double s =
      pairwise_sum(a, [m, scale](double v) { return std::exp(scale * v - m); });
  return m + std::log(s);
}

}  // namespace meanlab
