#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "meanlab/generator.hpp"
#include "meanlab/interval.hpp"
#include "meanlab/moments.hpp"
#include "meanlab/quadrature.hpp"
#include "meanlab/sample.hpp"

namespace meanlab {

inline constexpr double kEulerGamma = 0.57721566490153286;

/// xi = e^eta with eta exponential of the given rate; support (1, inf).
struct ExpLogDist {
  double rate;
};
/// xi lognormal with log-mean mu and log-sd sigma; support (0, inf).
struct LogNormalDist {
  double mu;
  double sigma;
};
/// xi = 1 + lognormal(mu, sigma); support (1, inf), no closed-form
/// log-moments.
struct ShiftedLogNormalDist {
  double mu;
  double sigma;
};
/// xi uniform on (a, b) with 0 < a < b.
struct UniformDist {
  double a;
  double b;
};
/// Degenerate xi = c.
struct PointMassDist {
  double c;
};

using DistributionSpec = std::variant<ExpLogDist, LogNormalDist,
                                      ShiftedLogNormalDist, UniformDist,
                                      PointMassDist>;

inline void validate(const DistributionSpec& dist) {
  std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ExpLogDist>) {
          if (!(d.rate > 0.0) || !std::isfinite(d.rate)) {
            throw std::invalid_argument("explog rate must be positive");
          }
        } else if constexpr (std::is_same_v<T, LogNormalDist> ||
                             std::is_same_v<T, ShiftedLogNormalDist>) {
          if (!(d.sigma > 0.0) || !std::isfinite(d.sigma) ||
              !std::isfinite(d.mu)) {
            throw std::invalid_argument("lognormal sigma must be positive");
          }
        } else if constexpr (std::is_same_v<T, UniformDist>) {
          if (!(0.0 < d.a && d.a < d.b) || !std::isfinite(d.b)) {
            throw std::invalid_argument("uniform interval needs 0 < a < b");
          }
        } else {
          if (!(d.c > 0.0) || !std::isfinite(d.c)) {
            throw std::invalid_argument("point mass must sit at c > 0");
          }
        }
      },
      dist);
}

inline DomainTag support_tag(const DistributionSpec& dist) {
  return std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ExpLogDist> ||
                      std::is_same_v<T, ShiftedLogNormalDist>) {
          return DomainTag::greater_than_one;
        } else if constexpr (std::is_same_v<T, UniformDist>) {
          return d.a >= 1.0 ? DomainTag::greater_than_one : DomainTag::positive;
        } else if constexpr (std::is_same_v<T, PointMassDist>) {
          return d.c > 1.0 ? DomainTag::greater_than_one : DomainTag::positive;
        } else {
          return DomainTag::positive;
        }
      },
      dist);
}

inline std::string distribution_name(const DistributionSpec& dist) {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ExpLogDist>) {
          return "explog(" + std::to_string(d.rate) + ")";
        } else if constexpr (std::is_same_v<T, LogNormalDist>) {
          return "lognormal(" + std::to_string(d.mu) + "," +
                 std::to_string(d.sigma) + ")";
        } else if constexpr (std::is_same_v<T, ShiftedLogNormalDist>) {
          return "shifted_lognormal(" + std::to_string(d.mu) + "," +
                 std::to_string(d.sigma) + ")";
        } else if constexpr (std::is_same_v<T, UniformDist>) {
          return "uniform(" + std::to_string(d.a) + "," + std::to_string(d.b) +
                 ")";
        } else {
          return "point_mass(" + std::to_string(d.c) + ")";
        }
      },
      dist);
}

namespace detail {

inline double standard_normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

// Gaussian tails below 1e-40 are dropped from the integration range.
inline constexpr double kGaussianRange = 13.5;

}  // namespace detail

/// E[h(xi)] by adaptive quadrature against the law of xi. Unavailable when
/// the quadrature fails to converge (heavy tails, divergence).
inline std::optional<double> expectation(
    const DistributionSpec& dist, const std::function<double(double)>& h,
    double abs_tol = 1e-9) {
  QuadratureResult q;
  if (const auto* e = std::get_if<ExpLogDist>(&dist)) {
    const double rate = e->rate;
    q = integrate_half_line(
        [&h, rate](double t) {
          return h(std::exp(t)) * rate * std::exp(-rate * t);
        },
        0.0, abs_tol);
  } else if (const auto* l = std::get_if<LogNormalDist>(&dist)) {
    const double mu = l->mu, sigma = l->sigma;
    q = integrate(
        [&h, mu, sigma](double z) {
          return h(std::exp(mu + sigma * z)) * detail::standard_normal_pdf(z);
        },
        -detail::kGaussianRange, detail::kGaussianRange, abs_tol);
  } else if (const auto* s = std::get_if<ShiftedLogNormalDist>(&dist)) {
    const double mu = s->mu, sigma = s->sigma;
    q = integrate(
        [&h, mu, sigma](double z) {
          return h(1.0 + std::exp(mu + sigma * z)) *
                 detail::standard_normal_pdf(z);
        },
        -detail::kGaussianRange, detail::kGaussianRange, abs_tol);
  } else if (const auto* u = std::get_if<UniformDist>(&dist)) {
    const double a = u->a, b = u->b;
    q = integrate([&h, a, b](double x) { return h(x) / (b - a); }, a, b,
                  abs_tol);
  } else {
    const double c = std::get<PointMassDist>(dist).c;
    const double v = h(c);
    if (!std::isfinite(v)) return std::nullopt;
    return v;
  }
  if (!q.converged || !std::isfinite(q.value)) return std::nullopt;
  return q.value;
}

/// E[xi^t] where a closed form exists; quadrature otherwise. Divergent
/// moments come back empty.
inline std::optional<double> power_moment(const DistributionSpec& dist,
                                          double t) {
  if (t == 0.0) return 1.0;
  if (const auto* e = std::get_if<ExpLogDist>(&dist)) {
    // E e^{t eta} = rate/(rate - t), finite only for t < rate.
    if (t >= e->rate) return std::nullopt;
    return e->rate / (e->rate - t);
  }
  if (const auto* l = std::get_if<LogNormalDist>(&dist)) {
    return std::exp(t * l->mu + 0.5 * t * t * l->sigma * l->sigma);
  }
  if (const auto* u = std::get_if<UniformDist>(&dist)) {
    if (t == -1.0) return std::log(u->b / u->a) / (u->b - u->a);
    return (std::pow(u->b, t + 1.0) - std::pow(u->a, t + 1.0)) /
           ((u->b - u->a) * (t + 1.0));
  }
  if (const auto* p = std::get_if<PointMassDist>(&dist)) {
    return std::pow(p->c, t);
  }
  return expectation(dist, [t](double x) { return std::pow(x, t); });
}

/// Fills the distribution-intrinsic fields of a MomentSet: log-moments,
/// the raw mean, and the ln*lnln moments used by the multiplicative
/// Cauchy quotient limits. The weighted block is left untouched.
inline MomentSet analytic_moments(const DistributionSpec& dist) {
  validate(dist);
  MomentSet m;
  if (const auto* e = std::get_if<ExpLogDist>(&dist)) {
    const double rate = e->rate;
    const double ln_rate = std::log(rate);
    m.mean_logs = MomentValue::analytic(1.0 / rate);
    m.var_logs = MomentValue::analytic(1.0 / (rate * rate));
    m.mean_xi = rate > 1.0 ? MomentValue::analytic(rate / (rate - 1.0))
                           : MomentValue::unavailable();
    // E[eta ln eta] and E[(eta ln eta)^2] for exponential eta via the
    // derivatives of the gamma function at 2 and 3:
    //   Gamma'(2) = 1 - g,   Gamma'(3) = 3 - 2g,
    //   Gamma''(3) = 2((3/2 - g)^2 + pi^2/6 - 5/4),   g = Euler-Mascheroni.
    const double g = kEulerGamma;
    const double gp2 = 1.0 - g;
    const double gp3 = 3.0 - 2.0 * g;
    const double gpp3 =
        2.0 * ((1.5 - g) * (1.5 - g) + std::numbers::pi * std::numbers::pi / 6.0 -
               1.25);
    const double mean_ll = (gp2 - ln_rate) / rate;
    const double second_ll =
        (gpp3 - 2.0 * ln_rate * gp3 + ln_rate * ln_rate * 2.0) / (rate * rate);
    m.mean_loglog = MomentValue::analytic(mean_ll);
    m.var_loglog = MomentValue::analytic(second_ll - mean_ll * mean_ll);
  } else if (const auto* l = std::get_if<LogNormalDist>(&dist)) {
    m.mean_logs = MomentValue::analytic(l->mu);
    m.var_logs = MomentValue::analytic(l->sigma * l->sigma);
    m.mean_xi =
        MomentValue::analytic(std::exp(l->mu + 0.5 * l->sigma * l->sigma));
    // ln xi takes non-positive values with positive probability, so
    // ln xi * ln ln xi is undefined.
    m.mean_loglog = MomentValue::unavailable();
    m.var_loglog = MomentValue::unavailable();
  } else if (const auto* s = std::get_if<ShiftedLogNormalDist>(&dist)) {
    m.mean_xi = MomentValue::analytic(
        1.0 + std::exp(s->mu + 0.5 * s->sigma * s->sigma));
    auto fill = [&dist](const std::function<double(double)>& h) {
      auto v = expectation(dist, h);
      return v ? MomentValue::quadrature(*v) : MomentValue::unavailable();
    };
    m.mean_logs = fill([](double x) { return std::log(x); });
    if (m.mean_logs.available()) {
      const double mu_log = *m.mean_logs.value;
      auto second = fill([](double x) {
        const double l = std::log(x);
        return l * l;
      });
      m.var_logs = second.available()
                       ? MomentValue::quadrature(*second.value - mu_log * mu_log)
                       : MomentValue::unavailable();
    }
    auto lll = [](double x) {
      const double y = std::log(x);
      return y == 0.0 ? 0.0 : y * std::log(y);
    };
    m.mean_loglog = fill(lll);
    if (m.mean_loglog.available()) {
      const double mu_ll = *m.mean_loglog.value;
      auto second = fill([lll](double x) {
        const double v = lll(x);
        return v * v;
      });
      m.var_loglog = second.available()
                         ? MomentValue::quadrature(*second.value - mu_ll * mu_ll)
                         : MomentValue::unavailable();
    }
  } else if (const auto* u = std::get_if<UniformDist>(&dist)) {
    const double a = u->a, b = u->b, w = b - a;
    m.mean_xi = MomentValue::analytic(0.5 * (a + b));
    const double la = std::log(a), lb = std::log(b);
    const double mean_log = (b * lb - b - (a * la - a)) / w;
    const double second_log =
        (b * (lb * lb - 2.0 * lb + 2.0) - a * (la * la - 2.0 * la + 2.0)) / w;
    m.mean_logs = MomentValue::analytic(mean_log);
    m.var_logs = MomentValue::analytic(second_log - mean_log * mean_log);
    if (a >= 1.0) {
      auto lll = [](double x) {
        const double y = std::log(x);
        return y == 0.0 ? 0.0 : y * std::log(y);
      };
      auto fill = [&dist](const std::function<double(double)>& h) {
        auto v = expectation(dist, h);
        return v ? MomentValue::quadrature(*v) : MomentValue::unavailable();
      };
      m.mean_loglog = fill(lll);
      if (m.mean_loglog.available()) {
        const double mu_ll = *m.mean_loglog.value;
        auto second = fill([lll](double x) {
          const double v = lll(x);
          return v * v;
        });
        m.var_loglog =
            second.available()
                ? MomentValue::quadrature(*second.value - mu_ll * mu_ll)
                : MomentValue::unavailable();
      }
    }
  } else {
    const double c = std::get<PointMassDist>(dist).c;
    m.mean_logs = MomentValue::analytic(std::log(c));
    m.var_logs = MomentValue::analytic(0.0);
    m.mean_xi = MomentValue::analytic(c);
    if (c > 1.0) {
      const double y = std::log(c);
      m.mean_loglog = MomentValue::analytic(y * std::log(y));
      m.var_loglog = MomentValue::analytic(0.0);
    }
  }
  m.validate();
  return m;
}

/// Weighted moment block E[p f], E[p], their variances and covariance for
/// an explicit generator/weight pair, filled by quadrature against the
/// law of xi (exactly for a point mass). Intrinsic fields are taken from
/// analytic_moments.
inline MomentSet bajraktarevic_moments(const DistributionSpec& dist,
                                       const Generator& f,
                                       const WeightFunction& p) {
  MomentSet m = analytic_moments(dist);
  const bool exact = std::holds_alternative<PointMassDist>(dist);
  auto fill = [&dist, exact](const std::function<double(double)>& h) {
    auto v = expectation(dist, h);
    if (!v) return MomentValue::unavailable();
    return exact ? MomentValue::analytic(*v) : MomentValue::quadrature(*v);
  };
  auto pf = [&f, &p](double x) { return p.eval(x) * f.eval(x); };
  auto pw = [&p](double x) { return p.eval(x); };
  m.mean_pf = fill(pf);
  m.mean_p = fill(pw);
  auto second_pf = fill([pf](double x) {
    const double v = pf(x);
    return v * v;
  });
  auto second_p = fill([pw](double x) {
    const double v = pw(x);
    return v * v;
  });
  auto mixed = fill([pf, pw](double x) { return pf(x) * pw(x); });
  if (m.mean_pf.available() && second_pf.available()) {
    m.var_pf = MomentValue{
        std::max(0.0, *second_pf.value - *m.mean_pf.value * *m.mean_pf.value),
        second_pf.source};
  }
  if (m.mean_p.available() && second_p.available()) {
    m.var_p = MomentValue{
        std::max(0.0, *second_p.value - *m.mean_p.value * *m.mean_p.value),
        second_p.source};
  }
  if (mixed.available() && m.mean_pf.available() && m.mean_p.available()) {
    m.cov_pf_p = MomentValue{*mixed.value - *m.mean_pf.value * *m.mean_p.value,
                             mixed.source};
  }
  m.validate();
  return m;
}

/// Weighted block for the Gini mean through its generator/weight
/// representation f(x) = x^{max(r,s)-min(r,s)} (or ln at r = s),
/// p(x) = x^{min(r,s)}. Closed power moments are used when the family has
/// them.
inline MomentSet gini_moment_set(const DistributionSpec& dist, double r,
                                 double s) {
  const double hi = std::max(r, s), lo = std::min(r, s);
  if (r == s) {
    return bajraktarevic_moments(dist, generators::log(),
                                 s == 0.0 ? weights::one() : weights::power(s));
  }
  MomentSet m = analytic_moments(dist);
  auto as_moment = [](std::optional<double> v) {
    return v ? MomentValue::analytic(*v) : MomentValue::unavailable();
  };
  auto e_hi = power_moment(dist, hi);
  auto e_lo = power_moment(dist, lo);
  auto e_2hi = power_moment(dist, 2.0 * hi);
  auto e_2lo = power_moment(dist, 2.0 * lo);
  auto e_mix = power_moment(dist, hi + lo);
  m.mean_pf = as_moment(e_hi);
  m.mean_p = as_moment(e_lo);
  if (e_hi && e_2hi) m.var_pf = MomentValue::analytic(std::max(0.0, *e_2hi - *e_hi * *e_hi));
  if (e_lo && e_2lo) m.var_p = MomentValue::analytic(std::max(0.0, *e_2lo - *e_lo * *e_lo));
  if (e_mix && e_hi && e_lo) m.cov_pf_p = MomentValue::analytic(*e_mix - *e_hi * *e_lo);
  m.validate();
  return m;
}

}  // namespace meanlab
