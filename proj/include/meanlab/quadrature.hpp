#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <queue>
#include <vector>

namespace meanlab {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
  std::size_t evaluations = 0;
};

namespace detail {

// Embedded Gauss 7 / Gauss 15 pair on [-1, 1]; the difference of the two
// rules serves as the local error estimate.
struct GaussNode {
  double x;
  double w;
};

inline constexpr std::array<GaussNode, 7> kGauss7{{
    {-9.49107912342758486e-01, 1.29484966168870647e-01},
    {-7.41531185599394460e-01, 2.79705391489276589e-01},
    {-4.05845151377397184e-01, 3.81830050505118312e-01},
    {0.00000000000000000e+00, 4.17959183673468959e-01},
    {4.05845151377397184e-01, 3.81830050505118312e-01},
    {7.41531185599394460e-01, 2.79705391489276589e-01},
    {9.49107912342758486e-01, 1.29484966168870647e-01},
}};

inline constexpr std::array<GaussNode, 15> kGauss15{{
    {-9.87992518020485377e-01, 3.07532419961186465e-02},
    {-9.37273392400705951e-01, 7.03660474881080689e-02},
    {-8.48206583410427206e-01, 1.07159220467171773e-01},
    {-7.24417731360170070e-01, 1.39570677926153908e-01},
    {-5.70972172608538830e-01, 1.66269205816993781e-01},
    {-3.94151347077563385e-01, 1.86161000015561878e-01},
    {-2.01194093997434514e-01, 1.98431485327111246e-01},
    {0.00000000000000000e+00, 2.02578241925560898e-01},
    {2.01194093997434514e-01, 1.98431485327111246e-01},
    {3.94151347077563385e-01, 1.86161000015561878e-01},
    {5.70972172608538830e-01, 1.66269205816993781e-01},
    {7.24417731360170070e-01, 1.39570677926153908e-01},
    {8.48206583410427206e-01, 1.07159220467171773e-01},
    {9.37273392400705951e-01, 7.03660474881080689e-02},
    {9.87992518020485377e-01, 3.07532419961186465e-02},
}};

struct Segment {
  double a, b;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment evaluate_segment(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double coarse = 0.0;
  for (const auto& n : kGauss7) coarse += n.w * f(mid + half * n.x);
  double fine = 0.0;
  for (const auto& n : kGauss15) fine += n.w * f(mid + half * n.x);
  coarse *= half;
  fine *= half;
  double err = std::abs(fine - coarse);
  if (!std::isfinite(fine)) err = std::numeric_limits<double>::infinity();
  return {a, b, fine, err};
}

}  // namespace detail

/// Adaptive integration of f over the finite interval [a, b]: worst
/// segment is bisected until the summed error estimate falls below
/// abs_tol. Non-convergence (e.g. a divergent integrand) is reported via
/// the converged flag, never as a spurious number.
template <class F>
QuadratureResult integrate(const F& f, double a, double b,
                           double abs_tol = 1e-9,
                           std::size_t max_segments = 4000) {
  QuadratureResult result;
  if (a == b) {
    result.converged = true;
    return result;
  }
  std::priority_queue<detail::Segment> queue;
  queue.push(detail::evaluate_segment(f, a, b));
  result.evaluations = 22;
  double total_error = queue.top().error;
  std::size_t segments = 1;
  while (total_error > abs_tol && segments < max_segments) {
    const detail::Segment worst = queue.top();
    queue.pop();
    if (!(worst.b > worst.a) ||
        worst.b - worst.a <= std::abs(worst.a) * 1e-15) {
      // Interval too small to split further; keep its estimate.
      queue.push({worst.a, worst.b, worst.value, 0.0});
      total_error -= worst.error;
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = detail::evaluate_segment(f, worst.a, mid);
    const auto right = detail::evaluate_segment(f, mid, worst.b);
    result.evaluations += 44;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++segments;
  }
  double sum = 0.0;
  double err = 0.0;
  while (!queue.empty()) {
    sum += queue.top().value;
    err += queue.top().error;
    queue.pop();
  }
  result.value = sum;
  result.error_estimate = err;
  result.converged = std::isfinite(sum) && err <= abs_tol;
  return result;
}

/// Integration over [a, inf) via the substitution x = a + t/(1-t).
template <class F>
QuadratureResult integrate_half_line(const F& f, double a,
                                     double abs_tol = 1e-9,
                                     std::size_t max_segments = 4000) {
  auto transformed = [&f, a](double t) {
    const double om = 1.0 - t;
    const double x = a + t / om;
    const double jacobian = 1.0 / (om * om);
    const double v = f(x) * jacobian;
    return std::isfinite(v) ? v : 0.0;
  };
  return integrate(transformed, 0.0, 1.0, abs_tol, max_segments);
}

}  // namespace meanlab
