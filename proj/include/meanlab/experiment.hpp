#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "meanlab/means.hpp"
#include "meanlab/parallel.hpp"
#include "meanlab/sampling.hpp"
#include "meanlab/stats.hpp"
#include "meanlab/theory.hpp"

namespace meanlab {

inline constexpr std::uint64_t kDefaultSeed = 0xB41A;
inline constexpr int kExperimentSchemaVersion = 1;

/// Acceptance bands; defaults match the documented verification targets
/// and every value can be overridden per experiment.
struct ToleranceConfig {
  double clt_mean_abs = 0.08;
  double clt_var_lo = 0.90;
  double clt_var_hi = 1.10;
  double clt_ks = 0.05;
  double slln_abs = 1e-2;
  double slln_trend_factor = 2.0;
  double constant_abs = 0.06;

  void set(const std::string& key, double value) {
    if (key == "clt_mean_abs") {
      clt_mean_abs = value;
    } else if (key == "clt_var_lo") {
      clt_var_lo = value;
    } else if (key == "clt_var_hi") {
      clt_var_hi = value;
    } else if (key == "clt_ks") {
      clt_ks = value;
    } else if (key == "slln_abs") {
      slln_abs = value;
    } else if (key == "slln_trend_factor") {
      slln_trend_factor = value;
    } else if (key == "constant_abs") {
      constant_abs = value;
    } else {
      throw std::invalid_argument("unknown tolerance key: " + key);
    }
  }
};

struct ExperimentSpec {
  std::string name = "experiment";
  MeanKind mean_kind = ExpCauchyKind{};
  DistributionSpec dist = ExpLogDist{1.0};
  std::vector<std::size_t> n_grid;
  std::size_t replicates = 1;
  std::uint64_t seed = kDefaultSeed;
  ExperimentMode mode = ExperimentMode::clt;
  ToleranceConfig tolerances;
  std::optional<CltParams> theory_override;

  void validate() const {
    if (n_grid.empty()) throw std::invalid_argument("n_grid must be non-empty");
    for (std::size_t i = 0; i + 1 < n_grid.size(); ++i) {
      if (!(n_grid[i] < n_grid[i + 1])) {
        throw std::invalid_argument("n_grid must be strictly increasing");
      }
    }
    if (n_grid.front() < 1) throw std::invalid_argument("n must be at least 1");
    if (replicates < 1) throw std::invalid_argument("replicates must be at least 1");
    meanlab::validate(dist);
  }
};

struct SizeReport {
  std::size_t n = 0;
  std::optional<double> mean_z;
  std::optional<double> var_z;
  std::optional<double> ks;
  std::optional<double> mean_abs_dev;
  std::optional<double> lnn_scaled_mean;
  bool pass = false;
};

struct ReplicateRow {
  std::size_t n;
  std::size_t replicate;
  double statistic;     // the computed mean M_n (or its relevant value)
  double standardized;  // mode-specific normalized statistic
};

struct ExperimentReport {
  std::string name;
  ExperimentMode mode = ExperimentMode::clt;
  std::string mean_kind;
  std::string distribution;
  CltParams theory;
  std::string moment_provenance;
  std::uint64_t seed = 0;
  std::vector<SizeReport> per_n;
  std::vector<ReplicateRow> replicate_rows;
  bool pass = false;
  double wall_seconds = 0.0;

  nlohmann::json to_json(bool include_timing = true) const;
  void write_replicates_csv(std::ostream& os) const;
};

namespace detail {

inline std::uint64_t replicate_stream(std::size_t n_index, std::size_t replicate) {
  return (static_cast<std::uint64_t>(n_index) << 32) |
         static_cast<std::uint64_t>(replicate);
}

inline TheoryResult resolve_theory(const ExperimentSpec& spec) {
  if (spec.theory_override) {
    return {*spec.theory_override, "user"};
  }
  return theory_for(spec.mean_kind, spec.dist, spec.mode);
}

inline ExperimentReport report_shell(const ExperimentSpec& spec,
                                     const TheoryResult& theory) {
  ExperimentReport report;
  report.name = spec.name;
  report.mode = spec.mode;
  report.mean_kind = mean_kind_name(spec.mean_kind);
  report.distribution = distribution_name(spec.dist);
  report.theory = theory.params;
  report.moment_provenance = theory.moment_provenance;
  report.seed = spec.seed;
  return report;
}

}  // namespace detail

/// Almost-sure convergence check: averages |M_n - limit| over replicates
/// for each n. PASS requires the deviation at the largest n to sit below
/// the configured tolerance (sqrt(n)-rate kinds) and to be no more than
/// trend_factor times the deviation at the smallest n.
inline ExperimentReport run_slln(const ExperimentSpec& spec, int threads = 1) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  const TheoryResult theory = detail::resolve_theory(spec);
  ExperimentReport report = detail::report_shell(spec, theory);
  const double limit = theory.params.limit;
  const std::size_t R = spec.replicates;
  for (std::size_t ni = 0; ni < spec.n_grid.size(); ++ni) {
    const std::size_t n = spec.n_grid[ni];
    std::vector<double> stat(R), dev(R);
    parallel_for(R, threads, [&](std::size_t r) {
      CounterRng rng(spec.seed, detail::replicate_stream(ni, r));
      const Sample s = draw_sample(spec.dist, n, rng);
      const double m = evaluate_mean(spec.mean_kind, s);
      stat[r] = m;
      dev[r] = std::abs(m - limit);
    });
    SizeReport sr;
    sr.n = n;
    sr.mean_abs_dev = mean_of(dev);
    report.per_n.push_back(sr);
    for (std::size_t r = 0; r < R; ++r) {
      report.replicate_rows.push_back({n, r, stat[r], dev[r]});
    }
  }
  const double first = *report.per_n.front().mean_abs_dev;
  const double last = *report.per_n.back().mean_abs_dev;
  const bool abs_ok = theory.params.scaling == ScalingRule::sqrt_n
                          ? last <= spec.tolerances.slln_abs
                          : true;
  const bool trend_ok = last <= spec.tolerances.slln_trend_factor * first;
  report.pass = abs_ok && trend_ok;
  for (auto& sr : report.per_n) sr.pass = report.pass;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

namespace detail {

inline ExperimentReport run_normal_regime(const ExperimentSpec& spec,
                                          int threads) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  const TheoryResult theory = detail::resolve_theory(spec);
  theory.params.validate();
  if (!theory.params.asym_variance || theory.params.degenerate ||
      !(*theory.params.asym_variance > 0.0)) {
    throw std::invalid_argument(spec.name +
                                ": degenerate variance, no normal regime");
  }
  ExperimentReport report = detail::report_shell(spec, theory);
  const double sigma = std::sqrt(*theory.params.asym_variance);
  const bool log_scale = theory.params.log_scale_statistic;
  const std::size_t R = spec.replicates;
  for (std::size_t ni = 0; ni < spec.n_grid.size(); ++ni) {
    const std::size_t n = spec.n_grid[ni];
    const double centering = theory.params.centering.at(n);
    const double root_n = std::sqrt(static_cast<double>(n));
    std::vector<double> stat(R), z(R);
    parallel_for(R, threads, [&](std::size_t r) {
      CounterRng rng(spec.seed, detail::replicate_stream(ni, r));
      const Sample s = draw_sample(spec.dist, n, rng);
      const double m = evaluate_mean(spec.mean_kind, s);
      const double base = log_scale ? std::log(m) : m;
      stat[r] = m;
      z[r] = root_n * (base - centering) / sigma;
    });
    SizeReport sr;
    sr.n = n;
    sr.mean_z = mean_of(z);
    sr.var_z = R > 1 ? sample_variance_of(z) : 0.0;
    sr.ks = ks_statistic(z, [](double x) { return normal_cdf(x); });
    sr.pass = std::abs(*sr.mean_z) < spec.tolerances.clt_mean_abs &&
              *sr.var_z >= spec.tolerances.clt_var_lo &&
              *sr.var_z <= spec.tolerances.clt_var_hi &&
              *sr.ks < spec.tolerances.clt_ks;
    report.per_n.push_back(sr);
    for (std::size_t r = 0; r < R; ++r) {
      report.replicate_rows.push_back({n, r, stat[r], z[r]});
    }
  }
  report.pass = report.per_n.back().pass;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

}  // namespace detail

/// Central limit verification: standardizes each replicate mean with the
/// theoretical centering and variance and compares the empirical law of Z
/// against the standard normal (moment bands plus KS distance). The
/// acceptance bands are evaluated at the largest n of the grid.
inline ExperimentReport run_clt(const ExperimentSpec& spec, int threads = 1) {
  return detail::run_normal_regime(spec, threads);
}

/// Normal regime of the multiplicative Cauchy quotient mean: the
/// statistic is ln(P_n) with the 1/ln(n) centering correction.
inline ExperimentReport run_mult_clt(const ExperimentSpec& spec,
                                     int threads = 1) {
  if (!std::holds_alternative<MultCauchyKind>(spec.mean_kind)) {
    throw std::invalid_argument("run_mult_clt requires the mult_cauchy kind");
  }
  return detail::run_normal_regime(spec, threads);
}

/// ln(n) regime: averages ln(n) (P_n - limit) over replicates and
/// compares against the deterministic limit constant.
inline ExperimentReport run_mult_constant(const ExperimentSpec& spec,
                                          int threads = 1) {
  if (!std::holds_alternative<MultCauchyKind>(spec.mean_kind)) {
    throw std::invalid_argument("run_mult_constant requires the mult_cauchy kind");
  }
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  const TheoryResult theory = detail::resolve_theory(spec);
  if (!theory.params.limit_constant) {
    throw std::invalid_argument(spec.name + ": limit constant unavailable");
  }
  ExperimentReport report = detail::report_shell(spec, theory);
  const double limit = theory.params.limit;
  const double constant = *theory.params.limit_constant;
  const std::size_t R = spec.replicates;
  for (std::size_t ni = 0; ni < spec.n_grid.size(); ++ni) {
    const std::size_t n = spec.n_grid[ni];
    const double ln_n = std::log(static_cast<double>(n));
    std::vector<double> stat(R), scaled(R);
    parallel_for(R, threads, [&](std::size_t r) {
      CounterRng rng(spec.seed, detail::replicate_stream(ni, r));
      const Sample s = draw_sample(spec.dist, n, rng);
      const double m = evaluate_mean(spec.mean_kind, s);
      stat[r] = m;
      scaled[r] = ln_n * (m - limit);
    });
    SizeReport sr;
    sr.n = n;
    sr.lnn_scaled_mean = mean_of(scaled);
    sr.pass = std::abs(*sr.lnn_scaled_mean - constant) <=
              spec.tolerances.constant_abs;
    report.per_n.push_back(sr);
    for (std::size_t r = 0; r < R; ++r) {
      report.replicate_rows.push_back({n, r, stat[r], scaled[r]});
    }
  }
  report.pass = report.per_n.back().pass;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

inline ExperimentReport run_experiment(const ExperimentSpec& spec,
                                       int threads = 1) {
  switch (spec.mode) {
    case ExperimentMode::slln:
      return run_slln(spec, threads);
    case ExperimentMode::clt:
      return run_clt(spec, threads);
    case ExperimentMode::mult_constant:
      return run_mult_constant(spec, threads);
    default:
      return run_mult_clt(spec, threads);
  }
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json clt_params_to_json(const CltParams& p) {
  nlohmann::json j;
  j["limit"] = p.limit;
  j["scaling"] = scaling_name(p.scaling);
  j["centering"] = {{"constant", p.centering.constant}};
  if (p.centering.log_n_coefficient) {
    j["centering"]["log_n_coefficient"] = *p.centering.log_n_coefficient;
  }
  if (p.asym_variance) j["asym_variance"] = *p.asym_variance;
  if (p.limit_constant) j["limit_constant"] = *p.limit_constant;
  j["degenerate"] = p.degenerate;
  j["log_scale_statistic"] = p.log_scale_statistic;
  return j;
}

inline nlohmann::json ExperimentReport::to_json(bool include_timing) const {
  nlohmann::json j;
  j["schema_version"] = kExperimentSchemaVersion;
  j["name"] = name;
  j["mode"] = experiment_mode_name(mode);
  j["mean_kind"] = mean_kind;
  j["distribution"] = distribution;
  j["seed"] = seed;
  j["theory"] = clt_params_to_json(theory);
  j["moment_provenance"] = moment_provenance;
  j["pass"] = pass;
  j["per_n"] = nlohmann::json::array();
  for (const auto& sr : per_n) {
    nlohmann::json e;
    e["n"] = sr.n;
    if (sr.mean_z) e["mean_z"] = *sr.mean_z;
    if (sr.var_z) e["var_z"] = *sr.var_z;
    if (sr.ks) e["ks"] = *sr.ks;
    if (sr.mean_abs_dev) e["mean_abs_dev"] = *sr.mean_abs_dev;
    if (sr.lnn_scaled_mean) e["lnn_scaled_mean"] = *sr.lnn_scaled_mean;
    e["pass"] = sr.pass;
    j["per_n"].push_back(e);
  }
  if (include_timing) j["wall_seconds"] = wall_seconds;
  return j;
}

inline void ExperimentReport::write_replicates_csv(std::ostream& os) const {
  os << "n,replicate,statistic,standardized\n";
  char buffer[128];
  for (const auto& row : replicate_rows) {
    std::snprintf(buffer, sizeof(buffer), "%zu,%zu,%.17g,%.17g\n", row.n,
                  row.replicate, row.statistic, row.standardized);
    os << buffer;
  }
}

// ---------------------------------------------------------------------------
// Experiment spec JSON

namespace detail {

inline Generator generator_from_json(const nlohmann::json& j) {
  const std::string name = j.at("name").get<std::string>();
  if (name == "identity") return generators::identity();
  if (name == "log") return generators::log();
  if (name == "reciprocal") return generators::reciprocal();
  if (name == "power") return generators::power(j.at("p").get<double>());
  throw std::invalid_argument("unknown generator: " + name);
}

inline WeightFunction weight_from_json(const nlohmann::json& j) {
  const std::string name = j.at("name").get<std::string>();
  if (name == "one") return weights::one();
  if (name == "identity") return weights::identity();
  if (name == "reciprocal") return weights::reciprocal();
  if (name == "power") return weights::power(j.at("q").get<double>());
  throw std::invalid_argument("unknown weight: " + name);
}

inline MeanKind mean_kind_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "quasi_arithmetic") {
    return QuasiArithmeticKind{generator_from_json(j.at("generator"))};
  }
  if (kind == "bajraktarevic") {
    return BajraktarevicKind{generator_from_json(j.at("generator")),
                             weight_from_json(j.at("weight"))};
  }
  if (kind == "gini") {
    return GiniKind{j.at("r").get<double>(), j.at("s").get<double>()};
  }
  if (kind == "holder") return HolderKind{j.at("p").get<double>()};
  if (kind == "exp_cauchy") return ExpCauchyKind{};
  if (kind == "log_cauchy") return LogCauchyKind{};
  if (kind == "mult_cauchy") return MultCauchyKind{};
  throw std::invalid_argument("unknown mean kind: " + kind);
}

inline DistributionSpec distribution_from_json(const nlohmann::json& j) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "explog") return ExpLogDist{j.at("rate").get<double>()};
  if (family == "lognormal") {
    return LogNormalDist{j.at("mu").get<double>(), j.at("sigma").get<double>()};
  }
  if (family == "shifted_lognormal") {
    return ShiftedLogNormalDist{j.at("mu").get<double>(),
                                j.at("sigma").get<double>()};
  }
  if (family == "uniform") {
    return UniformDist{j.at("a").get<double>(), j.at("b").get<double>()};
  }
  if (family == "point_mass") return PointMassDist{j.at("c").get<double>()};
  throw std::invalid_argument("unknown distribution family: " + family);
}

inline ExperimentMode mode_from_string(const std::string& mode) {
  if (mode == "slln") return ExperimentMode::slln;
  if (mode == "clt") return ExperimentMode::clt;
  if (mode == "mult_constant") return ExperimentMode::mult_constant;
  if (mode == "mult_clt") return ExperimentMode::mult_clt;
  throw std::invalid_argument("unknown experiment mode: " + mode);
}

inline CltParams clt_params_from_json(const nlohmann::json& j) {
  CltParams p;
  p.limit = j.at("limit").get<double>();
  const std::string scaling = j.value("scaling", "sqrt_n");
  p.scaling = scaling == "log_n" ? ScalingRule::log_n : ScalingRule::sqrt_n;
  if (j.contains("centering")) {
    p.centering.constant = j["centering"].at("constant").get<double>();
    if (j["centering"].contains("log_n_coefficient")) {
      p.centering.log_n_coefficient =
          j["centering"]["log_n_coefficient"].get<double>();
    }
  } else {
    p.centering.constant = p.limit;
  }
  if (j.contains("asym_variance")) p.asym_variance = j["asym_variance"].get<double>();
  if (j.contains("limit_constant")) p.limit_constant = j["limit_constant"].get<double>();
  p.degenerate = j.value("degenerate", false);
  p.log_scale_statistic = j.value("log_scale_statistic", false);
  p.validate();
  return p;
}

}  // namespace detail

inline ExperimentSpec parse_experiment_spec(const nlohmann::json& j) {
  if (!j.contains("schema_version") ||
      j["schema_version"].get<int>() != kExperimentSchemaVersion) {
    throw std::invalid_argument("experiment spec: unsupported schema_version");
  }
  ExperimentSpec spec;
  spec.name = j.value("name", std::string("experiment"));
  spec.mode = detail::mode_from_string(j.at("mode").get<std::string>());
  spec.mean_kind = detail::mean_kind_from_json(j.at("mean_kind"));
  spec.dist = detail::distribution_from_json(j.at("distribution"));
  spec.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
  spec.replicates = j.at("replicates").get<std::size_t>();
  spec.seed = j.value("seed", kDefaultSeed);
  if (j.contains("tolerances")) {
    for (const auto& [key, value] : j["tolerances"].items()) {
      spec.tolerances.set(key, value.get<double>());
    }
  }
  if (j.contains("theory") && j["theory"].is_object()) {
    spec.theory_override = detail::clt_params_from_json(j["theory"]);
  }
  spec.validate();
  return spec;
}

}  // namespace meanlab
