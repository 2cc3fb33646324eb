#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace meanlab {

enum class MomentSource { analytic, quadrature, user };

inline const char* moment_source_name(MomentSource s) {
  switch (s) {
    case MomentSource::analytic:
      return "analytic";
    case MomentSource::quadrature:
      return "quadrature";
    default:
      return "user";
  }
}

/// A single expectation that may be unavailable (divergent or undefined).
struct MomentValue {
  std::optional<double> value;
  MomentSource source = MomentSource::analytic;

  MomentValue() = default;
  MomentValue(double v, MomentSource s) : value(v), source(s) {}

  static MomentValue analytic(double v) { return {v, MomentSource::analytic}; }
  static MomentValue quadrature(double v) { return {v, MomentSource::quadrature}; }
  static MomentValue user(double v) { return {v, MomentSource::user}; }
  static MomentValue unavailable() { return {}; }

  bool available() const { return value.has_value(); }

  double require(const char* name) const {
    if (!value || !std::isfinite(*value)) {
      throw std::invalid_argument(std::string("required moment '") + name +
                                  "' is unavailable");
    }
    return *value;
  }
};

/// Population expectations entering the limit-theorem parameters. The
/// weighted block (mean_pf .. cov_pf_p) refers to a specific generator f
/// and weight p; the remaining fields are intrinsic to the distribution.
struct MomentSet {
  MomentValue mean_pf;    // E[p(xi) f(xi)]
  MomentValue mean_p;     // E[p(xi)]
  MomentValue var_pf;     // Var[p(xi) f(xi)]
  MomentValue var_p;      // Var[p(xi)]
  MomentValue cov_pf_p;   // Cov[p(xi) f(xi), p(xi)]
  MomentValue mean_logs;  // E[ln xi]
  MomentValue var_logs;   // Var[ln xi]
  MomentValue mean_xi;    // E[xi]
  MomentValue mean_loglog;  // E[ln xi * ln ln xi]
  MomentValue var_loglog;   // Var[ln xi * ln ln xi]

  void validate() const {
    auto check_var = [](const MomentValue& v, const char* name) {
      if (v.available() && !(*v.value >= 0.0)) {
        throw std::invalid_argument(std::string("variance '") + name +
                                    "' must be non-negative");
      }
    };
    check_var(var_pf, "var_pf");
    check_var(var_p, "var_p");
    check_var(var_logs, "var_logs");
    check_var(var_loglog, "var_loglog");
    if (cov_pf_p.available() && var_pf.available() && var_p.available()) {
      const double bound =
          std::sqrt(*var_pf.value * *var_p.value) + 1e-12;
      if (std::abs(*cov_pf_p.value) > bound) {
        throw std::invalid_argument(
            "cov_pf_p violates the Cauchy-Schwarz bound");
      }
    }
  }
};

}  // namespace meanlab
