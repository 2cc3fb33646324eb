#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "meanlab/asymptotics.hpp"
#include "meanlab/distribution.hpp"
#include "meanlab/rng.hpp"

using namespace meanlab;
using Catch::Approx;

namespace {

constexpr double kE = std::numbers::e;

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

MomentValue user(double v) { return MomentValue::user(v); }

// Random weighted moment block with a Cauchy-Schwarz-consistent covariance.
MomentSet random_weighted_set(CounterRng& rng) {
  MomentSet m;
  m.mean_pf = user(-5.0 + 10.0 * rng.next_unit());
  m.mean_p = user(0.2 + 5.0 * rng.next_unit());
  const double var_pf = 0.1 + 4.0 * rng.next_unit();
  const double var_p = 0.1 + 4.0 * rng.next_unit();
  const double rho = -0.95 + 1.9 * rng.next_unit();
  m.var_pf = user(var_pf);
  m.var_p = user(var_p);
  m.cov_pf_p = user(rho * std::sqrt(var_pf * var_p));
  return m;
}

}  // namespace

TEST_CASE("kolmogorov expectation") {
  REQUIRE(kolmogorov_expectation(generators::identity(), 3.0) == 3.0);
  REQUIRE(kolmogorov_expectation(generators::log(), 1.0) == Approx(kE));
  REQUIRE(kolmogorov_expectation(generators::power(2.0), 4.0) == Approx(2.0));
  // E f(xi) outside the generator range.
  REQUIRE_THROWS_AS(kolmogorov_expectation(generators::reciprocal(), 0.0),
                    std::range_error);
  REQUIRE_THROWS_AS(kolmogorov_expectation(generators::power(2.0), -1.0),
                    std::range_error);
}

TEST_CASE("bajraktarevic params reduce to the quasi-arithmetic variance at p=1") {
  CounterRng rng(101, 0);
  for (int i = 0; i < 1000; ++i) {
    MomentSet m;
    m.mean_pf = user(-3.0 + 6.0 * rng.next_unit());
    m.mean_p = user(1.0);
    m.var_pf = user(0.05 + 3.0 * rng.next_unit());
    m.var_p = user(0.0);
    m.cov_pf_p = user(0.0);
    const CltParams p = bajraktarevic_clt_params(generators::identity(), m);
    REQUIRE(rel_diff(p.limit, *m.mean_pf.value) <= 1e-12);
    REQUIRE(rel_diff(*p.asym_variance, *m.var_pf.value) <= 1e-12);

    // f = exp-style generator: variance var_pf / f'(limit)^2.
    const CltParams q = bajraktarevic_clt_params(generators::log(), m);
    const double limit = std::exp(*m.mean_pf.value);
    REQUIRE(rel_diff(q.limit, limit) <= 1e-12);
    const double expected = *m.var_pf.value / std::pow(1.0 / limit, 2.0);
    REQUIRE(rel_diff(*q.asym_variance, expected) <= 1e-12);
  }
}

TEST_CASE("bajraktarevic params on lognormal log-moments") {
  // f = ln, p = 1, lognormal(0, 0.5): limit 1, variance Var(ln xi) = 0.25.
  const MomentSet m =
      bajraktarevic_moments(LogNormalDist{0.0, 0.5}, generators::log(),
                            weights::one());
  const CltParams p = bajraktarevic_clt_params(generators::log(), m);
  REQUIRE(p.limit == Approx(1.0).margin(1e-8));
  REQUIRE(*p.asym_variance == Approx(0.25).margin(1e-7));
}

TEST_CASE("bajraktarevic params with weight x on lognormal against closed forms") {
  const MomentSet m = bajraktarevic_moments(
      LogNormalDist{0.0, 0.5}, generators::log(), weights::identity());
  REQUIRE(m.mean_p.require("mean_p") == Approx(1.1331484530668263).margin(1e-8));
  REQUIRE(m.mean_pf.require("mean_pf") ==
          Approx(0.2832871132667066).margin(1e-8));
  REQUIRE(m.var_pf.require("var_pf") ==
          Approx(0.7441090468070802).margin(1e-7));
  REQUIRE(m.var_p.require("var_p") == Approx(0.3646958540123867).margin(1e-7));
  REQUIRE(m.cov_pf_p.require("cov") ==
          Approx(0.5033542811781287).margin(1e-7));
  REQUIRE(m.mean_pf.source == MomentSource::quadrature);

  const CltParams p = bajraktarevic_clt_params(generators::log(), m);
  REQUIRE(p.limit == Approx(std::exp(0.25)).margin(1e-8));
  REQUIRE(*p.asym_variance == Approx(0.6615625051914608).margin(1e-6));
}

TEST_CASE("geometric params") {
  MomentSet m;
  m.mean_logs = user(0.0);
  m.var_logs = user(1.0);
  const CltParams a = geometric_clt_params(m);
  REQUIRE(a.limit == Approx(1.0));
  REQUIRE(*a.asym_variance == Approx(1.0));

  m.mean_logs = user(1.0);
  const CltParams b = geometric_clt_params(m);
  REQUIRE(b.limit == Approx(kE));
  REQUIRE(*b.asym_variance == Approx(kE * kE));

  m.var_logs = user(0.0);
  REQUIRE_THROWS_AS(geometric_clt_params(m), std::invalid_argument);
}

TEST_CASE("exponential and logarithmic Cauchy params coincide with geometric") {
  CounterRng rng(103, 1);
  for (int i = 0; i < 200; ++i) {
    MomentSet m;
    m.mean_logs = user(-1.0 + 3.0 * rng.next_unit());
    m.var_logs = user(0.01 + 2.0 * rng.next_unit());
    m.mean_xi = user(1.0 + 10.0 * rng.next_unit());
    const CltParams g = geometric_clt_params(m);
    const CltParams e = exp_cauchy_clt_params(m);
    const CltParams l = log_cauchy_clt_params(m);
    REQUIRE(e.limit == g.limit);
    REQUIRE(*e.asym_variance == *g.asym_variance);
    REQUIRE(l.limit == g.limit);
    REQUIRE(*l.asym_variance == *g.asym_variance);
  }
}

TEST_CASE("exp Cauchy params from an exponential log-law") {
  // xi = e^eta, eta ~ Exp(1): limit e, variance 1 * e^2.
  MomentSet m;
  m.mean_logs = user(1.0);
  m.var_logs = user(1.0);
  m.mean_xi = user(123.0);  // any finite value; existence is what matters
  const CltParams p = exp_cauchy_clt_params(m);
  REQUIRE(p.limit == Approx(kE));
  REQUIRE(*p.asym_variance == Approx(kE * kE));
}

TEST_CASE("missing E xi is rejected for the Cauchy quotient params") {
  // e^eta with eta ~ Exp(1) has a divergent mean: the moment provider
  // reports the field unavailable and the params constructor refuses it.
  const MomentSet m = analytic_moments(ExpLogDist{1.0});
  REQUIRE_FALSE(m.mean_xi.available());
  REQUIRE_THROWS_AS(exp_cauchy_clt_params(m), std::invalid_argument);
  REQUIRE_THROWS_AS(log_cauchy_clt_params(m), std::invalid_argument);
  REQUIRE(analytic_moments(ExpLogDist{2.0}).mean_xi.require("mean_xi") ==
          Approx(2.0));
}

TEST_CASE("point mass gives the degenerate log-Cauchy params") {
  const MomentSet m = analytic_moments(PointMassDist{4.0});
  const CltParams p = log_cauchy_clt_params(m);
  REQUIRE(p.degenerate);
  REQUIRE(p.limit == Approx(4.0));
  REQUIRE(*p.asym_variance == 0.0);
}

TEST_CASE("multiplicative Cauchy limit constant") {
  const MomentSet one = analytic_moments(ExpLogDist{1.0});
  REQUIRE(one.mean_logs.require("mean_logs") == Approx(1.0));
  REQUIRE(one.var_logs.require("var_logs") == Approx(1.0));
  REQUIRE(one.mean_loglog.require("mean_loglog") ==
          Approx(1.0 - kEulerGamma).epsilon(1e-12));
  REQUIRE(one.var_loglog.require("var_loglog") ==
          Approx(2.3141833978980401).epsilon(1e-12));
  REQUIRE(mult_cauchy_limit_constant(one) ==
          Approx(-1.1492469754553030).epsilon(1e-12));

  MomentSet zero;
  zero.mean_logs = user(1.0);
  zero.mean_loglog = user(0.0);
  REQUIRE(mult_cauchy_limit_constant(zero) == 0.0);

  const MomentSet point = analytic_moments(PointMassDist{kE});
  REQUIRE(mult_cauchy_limit_constant(point) == Approx(0.0).margin(1e-15));

  MomentSet negative;
  negative.mean_logs = user(-1.0);
  negative.mean_loglog = user(0.0);
  REQUIRE_THROWS_AS(mult_cauchy_limit_constant(negative),
                    std::invalid_argument);
}

TEST_CASE("explog(2) intrinsic moments against the quadrature oracle") {
  const MomentSet m = analytic_moments(ExpLogDist{2.0});
  REQUIRE(m.mean_logs.require("") == Approx(0.5));
  REQUIRE(m.var_logs.require("") == Approx(0.25));
  REQUIRE(m.mean_loglog.require("") ==
          Approx(-0.1351814227307391).epsilon(1e-12));
  REQUIRE(m.var_loglog.require("") ==
          Approx(0.2055596277448809).epsilon(1e-11));
}

TEST_CASE("multiplicative Cauchy normal-regime params") {
  const MomentSet m = analytic_moments(ExpLogDist{1.0});
  const CltParams p = mult_cauchy_clt_params(m);
  REQUIRE(p.log_scale_statistic);
  REQUIRE(p.limit == Approx(kE));
  REQUIRE(p.centering.constant == Approx(1.0));
  // ln(E ln xi) E ln xi - E[ln xi ln ln xi] = gamma - 1 for Exp(1).
  REQUIRE(*p.centering.log_n_coefficient ==
          Approx(kEulerGamma - 1.0).epsilon(1e-12));
  REQUIRE(*p.asym_variance == Approx(1.0));
  REQUIRE(p.centering.at(100) ==
          Approx(1.0 + (kEulerGamma - 1.0) / std::log(100.0)));

  MomentSet degenerate = analytic_moments(PointMassDist{kE});
  REQUIRE_THROWS_AS(mult_cauchy_clt_params(degenerate), std::invalid_argument);
}

TEST_CASE("delta method") {
  const auto exp_map = DifferentiableMap::exponential();
  const DeltaResult a = delta_method(0.0, 1.0, exp_map);
  REQUIRE(a.value == Approx(1.0));
  REQUIRE(a.variance == Approx(1.0));

  // Reproduces the geometric-mean variance from the log-scale limit.
  CounterRng rng(107, 2);
  for (int i = 0; i < 200; ++i) {
    MomentSet m;
    m.mean_logs = user(-1.0 + 3.0 * rng.next_unit());
    m.var_logs = user(0.01 + 2.0 * rng.next_unit());
    m.mean_xi = user(5.0);
    const DeltaResult d =
        delta_method(*m.mean_logs.value, *m.var_logs.value, exp_map);
    const CltParams g = exp_cauchy_clt_params(m);
    REQUIRE(rel_diff(d.value, g.limit) <= 1e-14);
    REQUIRE(rel_diff(d.variance, *g.asym_variance) <= 1e-14);
  }

  // Diagonal ratio case: v1/b^2 + v2 a^2/b^4.
  REQUIRE(ratio_delta_variance(3.0, 2.0, 0.5, 0.25, 0.0) ==
          Approx(0.5 / 4.0 + 0.25 * 9.0 / 16.0).epsilon(1e-14));
}

TEST_CASE("params are invariant under affine generator changes") {
  CounterRng rng(109, 3);
  for (int i = 0; i < 400; ++i) {
    MomentSet m = random_weighted_set(rng);
    // Keep the limit inside (0, inf) for the log generator.
    m.mean_pf = user(0.1 + 3.0 * rng.next_unit());
    const Generator g = generators::log();
    const CltParams base = bajraktarevic_clt_params(g, m);

    const double a = (rng.next_unit() < 0.5 ? -1.0 : 1.0) *
                     (0.25 + 4.0 * rng.next_unit());
    const double b = -5.0 + 10.0 * rng.next_unit();
    // The weighted block transforms exactly under f -> a f + b.
    MomentSet t = m;
    t.mean_pf = user(a * *m.mean_pf.value + b * *m.mean_p.value);
    t.var_pf = user(a * a * *m.var_pf.value + b * b * *m.var_p.value +
                    2.0 * a * b * *m.cov_pf_p.value);
    t.cov_pf_p = user(a * *m.cov_pf_p.value + b * *m.var_p.value);
    const CltParams affine =
        bajraktarevic_clt_params(generators::affine_of(g, a, b), t);
    REQUIRE(rel_diff(base.limit, affine.limit) <= 1e-10);
    REQUIRE(rel_diff(*base.asym_variance, *affine.asym_variance) <= 1e-10);
  }
}

TEST_CASE("uniform and shifted lognormal moments against the oracle") {
  const MomentSet u = analytic_moments(UniformDist{2.0, 5.0});
  REQUIRE(u.mean_logs.require("") ==
          Approx(1.2202984003502038).epsilon(1e-12));
  REQUIRE(u.var_logs.require("") == Approx(0.0671236607572503).epsilon(1e-10));
  REQUIRE(u.mean_loglog.require("") ==
          Approx(0.2715350914620345).margin(1e-8));
  REQUIRE(u.mean_loglog.source == MomentSource::quadrature);
  REQUIRE(u.mean_xi.require("") == Approx(3.5));

  const MomentSet s = analytic_moments(ShiftedLogNormalDist{0.0, 1.0});
  REQUIRE(s.mean_logs.require("") ==
          Approx(0.8060591833474398).margin(1e-8));
  REQUIRE(s.mean_xi.require("") == Approx(1.0 + std::exp(0.5)).epsilon(1e-12));

  // Uniform support dipping below 1: the ln*lnln moments are undefined.
  const MomentSet low = analytic_moments(UniformDist{0.5, 2.0});
  REQUIRE_FALSE(low.mean_loglog.available());
}

TEST_CASE("moment set validation") {
  MomentSet bad;
  bad.var_pf = user(1.0);
  bad.var_p = user(1.0);
  bad.cov_pf_p = user(2.0);  // violates |cov| <= sqrt(var var)
  REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
}
