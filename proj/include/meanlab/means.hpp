#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "meanlab/generator.hpp"
#include "meanlab/sample.hpp"
#include "meanlab/summation.hpp"

namespace meanlab {

namespace detail {

inline void check_in_domain(const Interval& domain, std::span<const double> xs,
                            const std::string& what) {
  for (double v : xs) {
    if (!domain.contains(v)) {
      std::ostringstream os;
      os << what << ": value " << v << " outside domain " << domain.describe();
      throw std::domain_error(os.str());
    }
  }
}

inline void check_size_at_least_two(const Sample& xs, const char* what) {
  if (xs.size() < 2) {
    throw std::invalid_argument(std::string(what) + " needs at least 2 values");
  }
}

inline double require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::range_error(std::string(what) + ": non-finite intermediate value");
  }
  return v;
}

/// Every mean lies in the closed hull of its arguments; rounding may push
/// the computed value out by an ulp, so the result is clamped back.
inline double clamp_to_hull(double m, const Sample& xs) {
  return std::clamp(m, xs.min(), xs.max());
}

inline std::vector<double> log_values(std::span<const double> xs) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = std::log(xs[i]);
  return out;
}

}  // namespace detail

/// f^{-1}( (1/n) sum f(x_i) ) for a strictly monotone generator f.
inline double quasi_arithmetic_mean(const Generator& g, const Sample& xs) {
  detail::check_in_domain(g.domain, xs.values(), "quasi_arithmetic_mean");
  const double avg =
      pairwise_sum(xs.values(), [&](double x) { return g.eval(x); }) /
      static_cast<double>(xs.size());
  detail::require_finite(avg, "quasi_arithmetic_mean");
  const double m = detail::require_finite(g.inverse(avg), "quasi_arithmetic_mean");
  return detail::clamp_to_hull(m, xs);
}

/// f^{-1}( sum p(x_i) f(x_i) / sum p(x_i) ) with positive weight p.
inline double bajraktarevic_mean(const Generator& g, const WeightFunction& p,
                                 const Sample& xs) {
  detail::check_in_domain(g.domain, xs.values(), "bajraktarevic_mean");
  for (double x : xs.values()) {
    const double w = p.eval(x);
    if (!(w > 0.0) || !std::isfinite(w)) {
      std::ostringstream os;
      os << "bajraktarevic_mean: weight " << w << " at x = " << x
         << " is not strictly positive";
      throw std::domain_error(os.str());
    }
  }
  const double weight_sum =
      pairwise_sum(xs.values(), [&](double x) { return p.eval(x); });
  if (weight_sum == 0.0) {
    throw std::range_error("bajraktarevic_mean: weight sum underflowed to zero");
  }
  const double weighted =
      pairwise_sum(xs.values(), [&](double x) { return p.eval(x) * g.eval(x); });
  const double avg = detail::require_finite(weighted / weight_sum, "bajraktarevic_mean");
  const double m = detail::require_finite(g.inverse(avg), "bajraktarevic_mean");
  return detail::clamp_to_hull(m, xs);
}

/// Two-parameter Gini mean ( sum x^r / sum x^s )^{1/(r-s)}, with the
/// r = s branch exp( sum x^s ln x / sum x^s ). Both branches run in the
/// log domain so large exponents and sample sizes do not overflow.
inline double gini_mean(double r, double s, const Sample& xs) {
  detail::check_in_domain(Interval::positive(), xs.values(), "gini_mean");
  if (!std::isfinite(r) || !std::isfinite(s)) {
    throw std::invalid_argument("gini_mean: parameters must be finite");
  }
  const std::vector<double> logs = detail::log_values(xs.values());
  double m;
  if (r != s) {
    const double num = log_sum_exp_scaled(logs, r);
    const double den = log_sum_exp_scaled(logs, s);
    m = std::exp((num - den) / (r - s));
  } else {
    double shift = -std::numeric_limits<double>::infinity();
    for (double l : logs) shift = std::max(shift, s * l);
    const double wsum =
        pairwise_sum(logs, [s, shift](double l) { return std::exp(s * l - shift); });
    const double wlog = pairwise_sum(
        logs, [s, shift](double l) { return std::exp(s * l - shift) * l; });
    m = std::exp(wlog / wsum);
  }
  detail::require_finite(m, "gini_mean");
  return detail::clamp_to_hull(m, xs);
}

/// Power mean ((1/n) sum x^p)^{1/p}; geometric mean at p = 0. Exponents
/// below kHolderGeometricCutoff in magnitude are evaluated on the
/// geometric branch, which keeps the p -> 0 limit well inside 1e-8 of the
/// returned value for every positive sample.
inline constexpr double kHolderGeometricCutoff = 1e-6;

inline double holder_mean(double p, const Sample& xs) {
  detail::check_in_domain(Interval::positive(), xs.values(), "holder_mean");
  if (!std::isfinite(p)) {
    throw std::invalid_argument("holder_mean: parameter must be finite");
  }
  const std::vector<double> logs = detail::log_values(xs.values());
  double m;
  if (std::abs(p) <= kHolderGeometricCutoff) {
    m = std::exp(pairwise_sum(logs) / static_cast<double>(logs.size()));
  } else {
    const double lse = log_sum_exp_scaled(logs, p);
    m = std::exp((lse - std::log(static_cast<double>(logs.size()))) / p);
  }
  detail::require_finite(m, "holder_mean");
  return detail::clamp_to_hull(m, xs);
}

/// Exponential Cauchy quotient (Beta-type) mean: the (n-1)-th root of
/// n x_1...x_n / (x_1+...+x_n). At n = 2 this is the harmonic mean.
inline double exp_cauchy_mean(const Sample& xs) {
  detail::check_size_at_least_two(xs, "exp_cauchy_mean");
  detail::check_in_domain(Interval::positive(), xs.values(), "exp_cauchy_mean");
  const std::vector<double> logs = detail::log_values(xs.values());
  const double n = static_cast<double>(xs.size());
  const double log_mean =
      (std::log(n) + pairwise_sum(logs) - log_sum_exp(logs)) / (n - 1.0);
  const double m = std::exp(log_mean);
  detail::require_finite(m, "exp_cauchy_mean");
  return detail::clamp_to_hull(m, xs);
}

/// Logarithmic Cauchy quotient mean
///   sum_i (prod_{j != i} x_j)^{1/(n-1)} ln x_i / sum_i ln x_i
/// with each leave-one-out product evaluated as exp((S - ln x_i)/(n-1)).
inline double log_cauchy_mean(const Sample& xs) {
  detail::check_size_at_least_two(xs, "log_cauchy_mean");
  detail::check_in_domain(Interval::greater_than(1.0), xs.values(),
                          "log_cauchy_mean");
  const std::vector<double> logs = detail::log_values(xs.values());
  const double n = static_cast<double>(xs.size());
  const double log_sum = pairwise_sum(logs);
  const double numerator = pairwise_sum(logs, [&](double l) {
    return std::exp((log_sum - l) / (n - 1.0)) * l;
  });
  const double m = numerator / log_sum;
  detail::require_finite(m, "log_cauchy_mean");
  return detail::clamp_to_hull(m, xs);
}

/// Multiplicative (power) Cauchy quotient mean, evaluated through the
/// identity ln P = ( ln(sum y_i) sum y_i - sum y_i ln y_i ) / (n ln n)
/// with y_i = ln x_i. A y_i that underflows to zero contributes its
/// analytic limit 0 to the sum.
inline double mult_cauchy_mean(const Sample& xs) {
  detail::check_size_at_least_two(xs, "mult_cauchy_mean");
  detail::check_in_domain(Interval::greater_than(1.0), xs.values(),
                          "mult_cauchy_mean");
  const std::vector<double> ys = detail::log_values(xs.values());
  const double n = static_cast<double>(xs.size());
  const double y_sum = pairwise_sum(ys);
  const double y_log_y = pairwise_sum(
      ys, [](double y) { return y == 0.0 ? 0.0 : y * std::log(y); });
  const double log_mean =
      (std::log(y_sum) * y_sum - y_log_y) / (n * std::log(n));
  const double m = std::exp(log_mean);
  detail::require_finite(m, "mult_cauchy_mean");
  return detail::clamp_to_hull(m, xs);
}

// ---------------------------------------------------------------------------
// Tagged dispatch

struct QuasiArithmeticKind {
  Generator generator;
};
struct BajraktarevicKind {
  Generator generator;
  WeightFunction weight;
};
struct GiniKind {
  double r;
  double s;
};
struct HolderKind {
  double p;
};
struct ExpCauchyKind {};
struct LogCauchyKind {};
struct MultCauchyKind {};

using MeanKind = std::variant<QuasiArithmeticKind, BajraktarevicKind, GiniKind,
                              HolderKind, ExpCauchyKind, LogCauchyKind,
                              MultCauchyKind>;

inline std::string mean_kind_name(const MeanKind& kind) {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, QuasiArithmeticKind>) {
          return "quasi_arithmetic[" + k.generator.name + "]";
        } else if constexpr (std::is_same_v<T, BajraktarevicKind>) {
          return "bajraktarevic[" + k.generator.name + "," + k.weight.name + "]";
        } else if constexpr (std::is_same_v<T, GiniKind>) {
          return "gini(" + std::to_string(k.r) + "," + std::to_string(k.s) + ")";
        } else if constexpr (std::is_same_v<T, HolderKind>) {
          return "holder(" + std::to_string(k.p) + ")";
        } else if constexpr (std::is_same_v<T, ExpCauchyKind>) {
          return "exp_cauchy";
        } else if constexpr (std::is_same_v<T, LogCauchyKind>) {
          return "log_cauchy";
        } else {
          return "mult_cauchy";
        }
      },
      kind);
}

/// Support every sample must satisfy before the kind may be evaluated.
inline Interval required_support(const MeanKind& kind) {
  return std::visit(
      [](const auto& k) -> Interval {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, QuasiArithmeticKind>) {
          return k.generator.domain;
        } else if constexpr (std::is_same_v<T, BajraktarevicKind>) {
          return k.generator.domain;
        } else if constexpr (std::is_same_v<T, GiniKind> ||
                             std::is_same_v<T, HolderKind> ||
                             std::is_same_v<T, ExpCauchyKind>) {
          return Interval::positive();
        } else {
          return Interval::greater_than(1.0);
        }
      },
      kind);
}

inline double evaluate_mean(const MeanKind& kind, const Sample& xs) {
  const Interval required = required_support(kind);
  if (!required.covers(xs.support())) {
    throw std::domain_error("evaluate_mean: sample tagged " +
                            xs.support().describe() + " incompatible with " +
                            mean_kind_name(kind) + " requiring " +
                            required.describe());
  }
  return std::visit(
      [&xs](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, QuasiArithmeticKind>) {
          return quasi_arithmetic_mean(k.generator, xs);
        } else if constexpr (std::is_same_v<T, BajraktarevicKind>) {
          return bajraktarevic_mean(k.generator, k.weight, xs);
        } else if constexpr (std::is_same_v<T, GiniKind>) {
          return gini_mean(k.r, k.s, xs);
        } else if constexpr (std::is_same_v<T, HolderKind>) {
          return holder_mean(k.p, xs);
        } else if constexpr (std::is_same_v<T, ExpCauchyKind>) {
          return exp_cauchy_mean(xs);
        } else if constexpr (std::is_same_v<T, LogCauchyKind>) {
          return log_cauchy_mean(xs);
        } else {
          return mult_cauchy_mean(xs);
        }
      },
      kind);
}

}  // namespace meanlab
