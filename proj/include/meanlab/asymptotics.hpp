#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>

#include "meanlab/generator.hpp"
#include "meanlab/moments.hpp"

namespace meanlab {

enum class ScalingRule { sqrt_n, log_n };

inline const char* scaling_name(ScalingRule s) {
  return s == ScalingRule::sqrt_n ? "sqrt_n" : "log_n";
}

/// Centering sequence c + k/ln(n); the coefficient is absent for plain
/// constant centering.
struct Centering {
  double constant = 0.0;
  std::optional<double> log_n_coefficient;

  double at(std::size_t n) const {
    double c = constant;
    if (log_n_coefficient) c += *log_n_coefficient / std::log(static_cast<double>(n));
    return c;
  }
};

/// Limit-theorem parameters for one (mean kind, distribution) pair: the
/// almost-sure limit of the mean, the scaling rule, the centering of the
/// normalized statistic, and either an asymptotic variance (normal
/// regime) or a deterministic limit constant (ln(n) regime).
struct CltParams {
  double limit = 0.0;
  ScalingRule scaling = ScalingRule::sqrt_n;
  Centering centering;
  std::optional<double> asym_variance;
  std::optional<double> limit_constant;
  // True when the source law is a point mass: the statistic is
  // identically constant and the variance is legitimately zero.
  bool degenerate = false;
  // The normalized statistic is ln(M_n) rather than M_n itself.
  bool log_scale_statistic = false;

  void validate() const {
    if (asym_variance.has_value() == limit_constant.has_value()) {
      throw std::invalid_argument(
          "CltParams must carry exactly one of asym_variance / limit_constant");
    }
    if (asym_variance && !degenerate && !(*asym_variance > 0.0)) {
      throw std::invalid_argument("asym_variance must be positive");
    }
  }
};

/// f^{-1}(E f(xi)): the population counterpart of a quasi-arithmetic
/// mean. A non-finite or out-of-domain inverse signals that E f(xi) fell
/// outside the closure of f's range.
inline double kolmogorov_expectation(const Generator& g, double mean_f) {
  if (!std::isfinite(mean_f)) {
    throw std::invalid_argument("kolmogorov_expectation: E f(xi) must be finite");
  }
  const double value = g.inverse(mean_f);
  if (!std::isfinite(value) || !g.domain.contains(value)) {
    throw std::range_error(
        "kolmogorov_expectation: E f(xi) outside the range of the generator");
  }
  return value;
}

/// Asymptotic parameters of the Bajraktarevic mean of i.i.d. variables:
/// limit f^{-1}(E[pf]/E[p]) and variance
///   (E p)^{-4} / f'(limit)^2 *
///     ( (E p)^2 Var(pf) - 2 E p E pf Cov(pf, p) + (E pf)^2 Var(p) ).
inline CltParams bajraktarevic_clt_params(const Generator& g,
                                          const MomentSet& m) {
  m.validate();
  const double mean_pf = m.mean_pf.require("mean_pf");
  const double mean_p = m.mean_p.require("mean_p");
  const double var_pf = m.var_pf.require("var_pf");
  const double var_p = m.var_p.require("var_p");
  const double cov = m.cov_pf_p.require("cov_pf_p");
  if (!(mean_p > 0.0)) {
    throw std::invalid_argument("bajraktarevic_clt_params: E p(xi) must be positive");
  }
  const double ratio = mean_pf / mean_p;
  const double limit = g.inverse(ratio);
  if (!std::isfinite(limit) || !g.domain.contains(limit)) {
    throw std::range_error(
        "bajraktarevic_clt_params: limit outside the generator range");
  }
  const double deriv = g.derivative(limit);
  if (deriv == 0.0 || !std::isfinite(deriv)) {
    throw std::range_error(
        "bajraktarevic_clt_params: generator derivative vanishes at the limit");
  }
  const double quad = mean_p * mean_p * var_pf -
                      2.0 * mean_p * mean_pf * cov +
                      mean_pf * mean_pf * var_p;
  const double variance =
      std::max(0.0, quad) / (std::pow(mean_p, 4.0) * deriv * deriv);
  CltParams out;
  out.limit = limit;
  out.scaling = ScalingRule::sqrt_n;
  out.centering = {limit, std::nullopt};
  out.asym_variance = variance;
  out.degenerate = variance == 0.0;
  return out;
}

/// Geometric-mean limit: a.s. limit e^{E ln xi}, variance
/// Var(ln xi) e^{2 E ln xi} under sqrt(n) scaling.
inline CltParams geometric_clt_params(const MomentSet& m) {
  const double mean_logs = m.mean_logs.require("mean_logs");
  const double var_logs = m.var_logs.require("var_logs");
  if (!(var_logs > 0.0)) {
    throw std::invalid_argument(
        "geometric_clt_params: Var(ln xi) must be strictly positive");
  }
  CltParams out;
  out.limit = std::exp(mean_logs);
  out.scaling = ScalingRule::sqrt_n;
  out.centering = {out.limit, std::nullopt};
  out.asym_variance = var_logs * std::exp(2.0 * mean_logs);
  return out;
}

/// The exponential Cauchy quotient mean behaves asymptotically like the
/// geometric mean; E xi < infinity is required on top of the log-moment
/// assumptions.
inline CltParams exp_cauchy_clt_params(const MomentSet& m) {
  m.mean_xi.require("mean_xi");
  return geometric_clt_params(m);
}

/// Same limit behaviour for the logarithmic Cauchy quotient mean. A point
/// mass (Var ln xi = 0) yields the degenerate parameter set rather than
/// an error: the statistic is then identically the constant.
inline CltParams log_cauchy_clt_params(const MomentSet& m) {
  m.mean_xi.require("mean_xi");
  const double mean_logs = m.mean_logs.require("mean_logs");
  const double var_logs = m.var_logs.require("var_logs");
  if (var_logs == 0.0) {
    CltParams out;
    out.limit = std::exp(mean_logs);
    out.scaling = ScalingRule::sqrt_n;
    out.centering = {out.limit, std::nullopt};
    out.asym_variance = 0.0;
    out.degenerate = true;
    return out;
  }
  return geometric_clt_params(m);
}

/// Deterministic limit of ln(n) (P_n - e^{E ln xi}):
///   e^{E ln xi} ( ln(E ln xi) E ln xi - E[ln xi ln ln xi] ).
inline double mult_cauchy_limit_constant(const MomentSet& m) {
  const double mean_logs = m.mean_logs.require("mean_logs");
  const double mean_loglog = m.mean_loglog.require("mean_loglog");
  if (!(mean_logs > 0.0)) {
    throw std::invalid_argument(
        "mult_cauchy_limit_constant: E ln xi must be positive");
  }
  return std::exp(mean_logs) *
         (std::log(mean_logs) * mean_logs - mean_loglog);
}

/// ln(n)-regime parameters for the multiplicative Cauchy quotient mean.
inline CltParams mult_cauchy_constant_params(const MomentSet& m) {
  CltParams out;
  out.limit = std::exp(m.mean_logs.require("mean_logs"));
  out.scaling = ScalingRule::log_n;
  out.centering = {out.limit, std::nullopt};
  out.limit_constant = mult_cauchy_limit_constant(m);
  return out;
}

/// Normal regime for ln(P_n): time-dependent centering
///   E ln xi + (ln(E ln xi) E ln xi - E[ln xi ln ln xi]) / ln n
/// under sqrt(n) scaling with variance Var(ln xi).
inline CltParams mult_cauchy_clt_params(const MomentSet& m) {
  const double mean_logs = m.mean_logs.require("mean_logs");
  const double mean_loglog = m.mean_loglog.require("mean_loglog");
  const double var_logs = m.var_logs.require("var_logs");
  const double var_loglog = m.var_loglog.require("var_loglog");
  if (!(var_loglog > 0.0)) {
    throw std::invalid_argument(
        "mult_cauchy_clt_params: Var(ln xi ln ln xi) must be strictly positive");
  }
  if (!(mean_logs > 0.0)) {
    throw std::invalid_argument("mult_cauchy_clt_params: E ln xi must be positive");
  }
  CltParams out;
  out.limit = std::exp(mean_logs);
  out.scaling = ScalingRule::sqrt_n;
  out.centering = {mean_logs,
                   std::log(mean_logs) * mean_logs - mean_loglog};
  out.asym_variance = var_logs;
  out.log_scale_statistic = true;
  return out;
}

/// Differentiable scalar map for the delta method.
struct DifferentiableMap {
  std::string name;
  std::function<double(double)> eval;
  std::function<double(double)> derivative;

  static DifferentiableMap exponential() {
    return {"exp", [](double x) { return std::exp(x); },
            [](double x) { return std::exp(x); }};
  }

  static DifferentiableMap of(const Generator& g) {
    return {g.name, g.eval, g.derivative};
  }
};

struct DeltaResult {
  double value;
  double variance;
};

/// First-order variance transport through a differentiable map:
/// (mu, v) -> (g(mu), g'(mu)^2 v).
inline DeltaResult delta_method(double limit_mu, double variance,
                                const DifferentiableMap& g) {
  const double value = g.eval(limit_mu);
  const double deriv = g.derivative(limit_mu);
  if (!std::isfinite(value) || !std::isfinite(deriv)) {
    throw std::range_error("delta_method: map not differentiable at the limit");
  }
  return {value, deriv * deriv * variance};
}

/// Fixed multivariate case for the ratio map (x, y) -> x/y: variance
/// D Sigma D^T with D = [1/b, -a/b^2] at means (a, b).
inline double ratio_delta_variance(double mean_num, double mean_den,
                                   double var_num, double var_den,
                                   double cov) {
  if (mean_den == 0.0) {
    throw std::invalid_argument("ratio_delta_variance: denominator mean is zero");
  }
  const double b2 = mean_den * mean_den;
  return var_num / b2 - 2.0 * cov * mean_num / (b2 * mean_den) +
         var_den * mean_num * mean_num / (b2 * b2);
}

}  // namespace meanlab
