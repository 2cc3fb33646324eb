#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "meanlab/experiment.hpp"

using namespace meanlab;
using Catch::Approx;

namespace {

constexpr double kE = std::numbers::e;

ExperimentSpec base_spec() {
  ExperimentSpec spec;
  spec.name = "test";
  spec.seed = 42;
  return spec;
}

}  // namespace

TEST_CASE("sampling is deterministic per (seed, stream)") {
  CounterRng a(42, 0), b(42, 0);
  const Sample sa = draw_sample(ExpLogDist{1.0}, 50, a);
  const Sample sb = draw_sample(ExpLogDist{1.0}, 50, b);
  REQUIRE(std::equal(sa.values().begin(), sa.values().end(),
                     sb.values().begin()));
}

TEST_CASE("point mass sampling") {
  CounterRng rng(1, 0);
  const Sample s = draw_sample(PointMassDist{kE}, 3, rng);
  REQUIRE(s.size() == 3);
  for (double v : s.values()) REQUIRE(v == kE);
}

TEST_CASE("samples respect their support strictly") {
  const std::vector<DistributionSpec> dists = {
      ExpLogDist{1.0}, ExpLogDist{0.25}, LogNormalDist{0.0, 1.0},
      ShiftedLogNormalDist{-1.0, 2.0}, UniformDist{0.5, 2.0},
      UniformDist{1.0, 9.0}, PointMassDist{2.5}};
  for (const auto& dist : dists) {
    CounterRng rng(99, 7);
    const Sample s = draw_sample(dist, 2000, rng);
    REQUIRE(s.tag() == support_tag(dist));
    const double lo = s.tag() == DomainTag::greater_than_one ? 1.0 : 0.0;
    for (double v : s.values()) REQUIRE(v > lo);
  }
}

TEST_CASE("slln on a point mass has zero deviation") {
  ExperimentSpec spec = base_spec();
  spec.mode = ExperimentMode::slln;
  spec.dist = PointMassDist{kE};
  spec.n_grid = {10, 100};
  spec.replicates = 8;
  for (const MeanKind& kind :
       {MeanKind{ExpCauchyKind{}}, MeanKind{LogCauchyKind{}},
        MeanKind{MultCauchyKind{}}, MeanKind{GiniKind{2.0, 1.0}},
        MeanKind{QuasiArithmeticKind{generators::log()}}}) {
    spec.mean_kind = kind;
    const ExperimentReport report = run_slln(spec, 2);
    REQUIRE(report.pass);
    for (const auto& sr : report.per_n) REQUIRE(*sr.mean_abs_dev == 0.0);
  }
}

TEST_CASE("slln deviations shrink for the exponential Cauchy mean") {
  ExperimentSpec spec = base_spec();
  spec.mode = ExperimentMode::slln;
  spec.mean_kind = ExpCauchyKind{};
  spec.dist = ExpLogDist{2.0};
  spec.n_grid = {100, 10000};
  spec.replicates = 32;
  const ExperimentReport report = run_slln(spec, 4);
  REQUIRE(report.theory.limit == Approx(std::exp(0.5)));
  REQUIRE(*report.per_n.back().mean_abs_dev <
          *report.per_n.front().mean_abs_dev);
  REQUIRE(report.pass);
}

TEST_CASE("clt run on the classical case passes the default bands") {
  ExperimentSpec spec = base_spec();
  spec.mode = ExperimentMode::clt;
  spec.mean_kind = BajraktarevicKind{generators::identity(), weights::one()};
  spec.dist = LogNormalDist{0.0, 1.0};
  spec.n_grid = {2000};
  spec.replicates = 600;
  const ExperimentReport report = run_clt(spec, 4);
  REQUIRE(report.pass);
  REQUIRE(std::abs(*report.per_n.back().mean_z) < 0.08);
  REQUIRE(*report.per_n.back().var_z > 0.85);
  REQUIRE(*report.per_n.back().var_z < 1.15);
}

TEST_CASE("clt runs are seed-robust") {
  ExperimentSpec spec = base_spec();
  spec.mode = ExperimentMode::clt;
  spec.mean_kind = ExpCauchyKind{};
  spec.dist = ExpLogDist{2.0};
  spec.n_grid = {1500};
  spec.replicates = 800;
  spec.seed = 1;
  const ExperimentReport a = run_clt(spec, 4);
  spec.seed = 2;
  const ExperimentReport b = run_clt(spec, 4);
  REQUIRE(a.pass);
  REQUIRE(b.pass);
  REQUIRE(*a.per_n.back().mean_z != *b.per_n.back().mean_z);
}

TEST_CASE("B_n and L_n share their theory parameters") {
  ExperimentSpec spec = base_spec();
  spec.mode = ExperimentMode::clt;
  spec.dist = ExpLogDist{2.0};
  spec.n_grid = {500};
  spec.replicates = 50;
  spec.mean_kind = ExpCauchyKind{};
  const ExperimentReport bn = run_clt(spec, 2);
  spec.mean_kind = LogCauchyKind{};
  const ExperimentReport ln = run_clt(spec, 2);
  REQUIRE(bn.theory.limit == ln.theory.limit);
  REQUIRE(*bn.theory.asym_variance == *ln.theory.asym_variance);
}

TEST_CASE("reports are byte-identical across thread counts") {
  ExperimentSpec spec = base_spec();
  spec.mode = ExperimentMode::clt;
  spec.mean_kind = ExpCauchyKind{};
  spec.dist = ExpLogDist{2.0};
  spec.n_grid = {200, 800};
  spec.replicates = 120;
  const ExperimentReport one = run_clt(spec, 1);
  const ExperimentReport eight = run_clt(spec, 8);
  REQUIRE(one.to_json(false).dump() == eight.to_json(false).dump());
  std::ostringstream csv_one, csv_eight;
  one.write_replicates_csv(csv_one);
  eight.write_replicates_csv(csv_eight);
  REQUIRE(csv_one.str() == csv_eight.str());
}

TEST_CASE("mult constant run on a point mass is exactly the zero constant") {
  ExperimentSpec spec = base_spec();
  spec.mode = ExperimentMode::mult_constant;
  spec.mean_kind = MultCauchyKind{};
  spec.dist = PointMassDist{kE};
  spec.n_grid = {100, 1000};
  spec.replicates = 16;
  const ExperimentReport report = run_mult_constant(spec, 2);
  REQUIRE(report.pass);
  REQUIRE(*report.theory.limit_constant == Approx(0.0).margin(1e-15));
  for (const auto& sr : report.per_n) {
    REQUIRE(*sr.lnn_scaled_mean == 0.0);
  }
}

TEST_CASE("mult clt run at moderate n stays within the lenient bands") {
  ExperimentSpec spec = base_spec();
  spec.mode = ExperimentMode::mult_clt;
  spec.mean_kind = MultCauchyKind{};
  spec.dist = ExpLogDist{1.0};
  spec.n_grid = {20000};
  spec.replicates = 400;
  spec.tolerances.clt_mean_abs = 0.12;
  spec.tolerances.clt_var_lo = 0.80;
  spec.tolerances.clt_var_hi = 1.20;
  spec.tolerances.clt_ks = 0.10;
  const ExperimentReport report = run_mult_clt(spec, 4);
  REQUIRE(report.pass);
  REQUIRE(report.theory.log_scale_statistic);
}

TEST_CASE("log-scale and direct-scale Z statistics agree to first order") {
  // For kinds sharing the geometric-mean limit law, the direct-scale Z
  // equals sqrt(n)(e^d - 1)/sqrt(v) with d the log-scale deviation, so
  // |Z_direct - Z_log| <= 0.51 Z_log^2 sqrt(v/n) e^{|d|} + rounding.
  const MomentSet m = analytic_moments(ExpLogDist{2.0});
  const CltParams params = exp_cauchy_clt_params(m);
  const double v_log = m.var_logs.require("");
  const double m_log = m.mean_logs.require("");
  const std::size_t n = 1000;
  for (std::uint64_t r = 0; r < 64; ++r) {
    CounterRng rng(4242, r);
    const Sample s = draw_sample(ExpLogDist{2.0}, n, rng);
    const double mean = exp_cauchy_mean(s);
    const double root_n = std::sqrt(static_cast<double>(n));
    const double z_direct =
        root_n * (mean - params.limit) / std::sqrt(*params.asym_variance);
    const double d = std::log(mean) - m_log;
    const double z_log = root_n * d / std::sqrt(v_log);
    const double bound = 0.51 * z_log * z_log * std::sqrt(v_log / n) *
                             std::exp(std::abs(d)) +
                         1e-9;
    REQUIRE(std::abs(z_direct - z_log) <= bound);
  }
}

TEST_CASE("experiment specs parse from JSON and reject malformed input") {
  nlohmann::json j = {
      {"schema_version", 1},
      {"name", "parse_test"},
      {"mode", "clt"},
      {"mean_kind", {{"kind", "gini"}, {"r", 2.0}, {"s", 1.0}}},
      {"distribution", {{"family", "lognormal"}, {"mu", 0.0}, {"sigma", 0.5}}},
      {"n_grid", {10, 100}},
      {"replicates", 5},
      {"seed", 7},
      {"tolerances", {{"clt_ks", 0.1}}}};
  const ExperimentSpec spec = parse_experiment_spec(j);
  REQUIRE(spec.name == "parse_test");
  REQUIRE(spec.tolerances.clt_ks == 0.1);
  REQUIRE(std::holds_alternative<GiniKind>(spec.mean_kind));

  nlohmann::json bad = j;
  bad["schema_version"] = 99;
  REQUIRE_THROWS_AS(parse_experiment_spec(bad), std::invalid_argument);
  bad = j;
  bad["mode"] = "nope";
  REQUIRE_THROWS_AS(parse_experiment_spec(bad), std::invalid_argument);
  bad = j;
  bad["n_grid"] = {100, 100};
  REQUIRE_THROWS_AS(parse_experiment_spec(bad), std::invalid_argument);
  bad = j;
  bad["replicates"] = 0;
  REQUIRE_THROWS_AS(parse_experiment_spec(bad), std::invalid_argument);
}

TEST_CASE("user theory overrides are honored and recorded") {
  ExperimentSpec spec = base_spec();
  spec.mode = ExperimentMode::clt;
  spec.mean_kind = ExpCauchyKind{};
  spec.dist = ExpLogDist{2.0};
  spec.n_grid = {500};
  spec.replicates = 40;
  CltParams params;
  params.limit = std::exp(0.5);
  params.centering = {params.limit, std::nullopt};
  params.asym_variance = 0.25 * kE;
  spec.theory_override = params;
  const ExperimentReport report = run_clt(spec, 2);
  REQUIRE(report.moment_provenance == "user");
}

TEST_CASE("tolerance overrides reject unknown keys") {
  ToleranceConfig config;
  REQUIRE_THROWS_AS(config.set("bogus", 1.0), std::invalid_argument);
  config.set("clt_ks", 0.2);
  REQUIRE(config.clt_ks == 0.2);
}

TEST_CASE("degenerate distributions cannot run the normal regime") {
  ExperimentSpec spec = base_spec();
  spec.mode = ExperimentMode::clt;
  spec.mean_kind = LogCauchyKind{};
  spec.dist = PointMassDist{2.0};
  spec.n_grid = {10};
  spec.replicates = 4;
  REQUIRE_THROWS_AS(run_clt(spec, 1), std::invalid_argument);
}
