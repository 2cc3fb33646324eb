#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "meanlab/means.hpp"
#include "meanlab/rng.hpp"
#include "meanlab/summation.hpp"

namespace meanlab {

struct AxiomVerdict {
  bool bounds = false;
  bool strict = false;  // vacuously true for constant tuples
  bool symmetric = false;
  bool all() const { return bounds && strict && symmetric; }
};

namespace detail {

inline double relative_difference(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

}  // namespace detail

/// Checks the defining mean axioms on one tuple: hull bounds, strictness
/// for non-constant tuples, and invariance under a random permutation
/// (1e-12 relative).
inline AxiomVerdict check_mean_axioms(const MeanKind& kind, const Sample& xs,
                                      CounterRng& rng) {
  AxiomVerdict verdict;
  const double m = evaluate_mean(kind, xs);
  const double lo = xs.min();
  const double hi = xs.max();
  verdict.bounds = lo <= m && m <= hi;
  verdict.strict = xs.all_equal() ? true : (lo < m && m < hi);
  std::vector<double> shuffled(xs.values().begin(), xs.values().end());
  for (std::size_t i = shuffled.size(); i > 1; --i) {
    const std::size_t j = rng.next_u64() % i;
    std::swap(shuffled[i - 1], shuffled[j]);
  }
  const Sample permuted = xs.tag() == DomainTag::interval
                              ? Sample(std::move(shuffled), xs.support())
                              : Sample(std::move(shuffled), xs.tag());
  const double mp = evaluate_mean(kind, permuted);
  verdict.symmetric = detail::relative_difference(m, mp) <= 1e-12;
  return verdict;
}

struct ChainVerdict {
  double lower = 0.0;   // n ln(n) y_min
  double middle = 0.0;  // sum y_i ln(S / y_i)
  double upper = 0.0;   // n ln(n) y_max
  bool holds = false;
  bool strict = false;  // strict on both sides (expected iff not all equal)
};

/// The two-sided bound n ln(n) y_(1) <= sum_i y_i ln(S/y_i) <= n ln(n) y_(n)
/// on positive log-scale variables; equivalent to the multiplicative
/// Cauchy quotient mean lying inside the hull of the original sample.
inline ChainVerdict mult_cauchy_hull_chain(std::vector<double> ys) {
  if (ys.size() < 2) {
    throw std::invalid_argument("mult_cauchy_hull_chain: need at least 2 values");
  }
  for (double y : ys) {
    if (!(y > 0.0) || !std::isfinite(y)) {
      throw std::domain_error("mult_cauchy_hull_chain: values must be positive");
    }
  }
  std::sort(ys.begin(), ys.end());
  const double n = static_cast<double>(ys.size());
  const double sum = pairwise_sum(ys);
  const double middle =
      pairwise_sum(ys, [sum](double y) { return y * std::log(sum / y); });
  ChainVerdict v;
  v.lower = n * std::log(n) * ys.front();
  v.upper = n * std::log(n) * ys.back();
  v.middle = middle;
  v.holds = v.lower <= middle && middle <= v.upper;
  v.strict = v.lower < middle && middle < v.upper;
  return v;
}

/// Probability vector: strictly positive entries summing to one.
class ProbVector {
 public:
  explicit ProbVector(std::vector<double> p) : p_(std::move(p)) {
    if (p_.empty()) throw std::invalid_argument("ProbVector: empty");
    double sum = 0.0;
    for (double v : p_) {
      if (!(v > 0.0) || !(v < 1.0)) {
        throw std::invalid_argument("ProbVector: entries must lie in (0, 1)");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw std::invalid_argument("ProbVector: entries must sum to 1");
    }
  }
  std::span<const double> values() const { return p_; }
  std::size_t size() const { return p_.size(); }

 private:
  std::vector<double> p_;
};

struct EntropyVerdict {
  double entropy = 0.0;
  double log_n = 0.0;
  double scaled_max = 0.0;  // n ln(n) max_i p_i
  bool holds = false;
};

/// Entropy bound chain: -sum p_i ln p_i <= ln n <= n ln(n) max_i p_i.
inline EntropyVerdict entropy_bound(const ProbVector& p) {
  EntropyVerdict v;
  v.entropy =
      -pairwise_sum(p.values(), [](double q) { return q * std::log(q); });
  const double n = static_cast<double>(p.size());
  v.log_n = std::log(n);
  double max_p = 0.0;
  for (double q : p.values()) max_p = std::max(max_p, q);
  v.scaled_max = n * v.log_n * max_p;
  v.holds = v.entropy <= v.log_n + 1e-12 && v.log_n <= v.scaled_max + 1e-12;
  return v;
}

struct BisymQuadruple {
  double x, y, s, t;
};

/// M(M(x,y), M(s,t)) - M(M(x,s), M(y,t)). A zero gap (within rounding)
/// certifies the bisymmetry equation at this quadruple; quasi-arithmetic
/// means satisfy it identically.
inline double bisymmetry_gap(const std::function<double(double, double)>& mean2,
                             const BisymQuadruple& q) {
  const double row = mean2(mean2(q.x, q.y), mean2(q.s, q.t));
  const double col = mean2(mean2(q.x, q.s), mean2(q.y, q.t));
  return row - col;
}

/// Two-point reduction of the logarithmic Cauchy quotient mean with root
/// index n: (x^{1/(n-1)} ln y + y^{1/(n-1)} ln x) / ln(xy) on (1, inf)^2.
inline double F_functional(double x, double y, int n = 2) {
  if (n < 2) throw std::invalid_argument("F_functional: n must be at least 2");
  if (!(x > 1.0) || !(y > 1.0)) {
    throw std::domain_error("F_functional: arguments must exceed 1");
  }
  const double root = 1.0 / (n - 1.0);
  return (std::pow(x, root) * std::log(y) + std::pow(y, root) * std::log(x)) /
         (std::log(x) + std::log(y));
}

/// (a+b) ln(a+b) - a ln a - b ln b on (0, inf)^2; the log-scale two-point
/// reduction of the multiplicative Cauchy quotient mean (up to the
/// n ln(n) factor). Symmetric and strictly increasing in each argument.
inline double G_functional(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error("G_functional: arguments must be positive");
  }
  const double s = a + b;
  return s * std::log(s) - a * std::log(a) - b * std::log(b);
}

struct CounterexampleL {
  int n = 2;
  // n = 2: the two sides of the bisymmetry identity at the witness point.
  // n > 2: log-scale values of the reduced identity's two sides.
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool refutes = false;
};

/// Numeric refutation of bisymmetry for the two-point log-Cauchy
/// reduction. For n = 2 the witness (x = y = e^10, s = e, t = e^2)
/// separates the two sides around 2800; for n > 2 the witness
/// x = y = e^{2(n-1)^2}, s = t = e^{(n-1)^2} reduces to a strict
/// convexity inequality, checked in log scale to avoid overflow.
inline CounterexampleL reproduce_counterexample_L(int n) {
  if (n < 2) throw std::invalid_argument("reproduce_counterexample_L: n >= 2");
  CounterexampleL out;
  out.n = n;
  const double e = std::numbers::e;
  if (n == 2) {
    auto F = [](double a, double b) { return F_functional(a, b, 2); };
    const double x = std::exp(10.0);
    out.lhs = F(F(x, x), F(e, e * e));
    out.rhs = F(F(x, e), F(x, e * e));
    out.margin = out.rhs - out.lhs;
    out.refutes = out.lhs < 2800.0 && 2800.0 < out.rhs;
    return out;
  }
  // ((e+2)/3)^{n-1} < (e^{n-1} + 2)/3, strict for n > 2.
  const double m = static_cast<double>(n - 1);
  out.lhs = m * std::log((e + 2.0) / 3.0);
  out.rhs = m + std::log1p(2.0 * std::exp(-m)) - std::log(3.0);
  out.margin = out.rhs - out.lhs;
  out.refutes = out.margin > 0.0;
  return out;
}

struct BisymWitness {
  BisymQuadruple q{1.0, 1.0, 1.0, 1.0};
  double gap = 0.0;
};

namespace detail {

inline double abs_gap_G(double x, double y, double s, double t) {
  return std::abs(bisymmetry_gap(
      [](double a, double b) { return G_functional(a, b); },
      BisymQuadruple{x, y, s, t}));
}

// Golden-section maximization of f over [lo, hi].
template <class F>
double golden_max(const F& f, double lo, double hi, int iterations = 48) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iterations; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return fc > fd ? c : d;
}

}  // namespace detail

/// Deterministic search for a quadruple witnessing that G is not
/// bisymmetric: coarse grid sweep in lexicographic order (ties keep the
/// earlier quadruple) followed by cyclic golden-section refinement of
/// each coordinate within its grid cell.
inline BisymWitness falsify_bisymmetry_G() {
  const std::vector<double> grid{0.5, 1.0, 2.0, 4.0};
  BisymWitness best;
  double best_abs = -1.0;
  for (double x : grid) {
    for (double y : grid) {
      for (double s : grid) {
        for (double t : grid) {
          const double g = detail::abs_gap_G(x, y, s, t);
          if (g > best_abs) {
            best_abs = g;
            best.q = {x, y, s, t};
          }
        }
      }
    }
  }
  double coords[4] = {best.q.x, best.q.y, best.q.s, best.q.t};
  for (int pass = 0; pass < 3; ++pass) {
    for (int c = 0; c < 4; ++c) {
      const double lo = std::max(1e-3, coords[c] * 0.5);
      const double hi = std::min(10.0, coords[c] * 2.0);
      coords[c] = detail::golden_max(
          [&](double v) {
            double probe[4] = {coords[0], coords[1], coords[2], coords[3]};
            probe[c] = v;
            return detail::abs_gap_G(probe[0], probe[1], probe[2], probe[3]);
          },
          lo, hi);
    }
  }
  best.q = {coords[0], coords[1], coords[2], coords[3]};
  best.gap = bisymmetry_gap(
      [](double a, double b) { return G_functional(a, b); }, best.q);
  return best;
}

}  // namespace meanlab
