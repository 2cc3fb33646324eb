#pragma once

#include <stdexcept>
#include <string>
#include <variant>

#include "meanlab/asymptotics.hpp"
#include "meanlab/distribution.hpp"
#include "meanlab/means.hpp"

namespace meanlab {

enum class ExperimentMode { slln, clt, mult_constant, mult_clt };

inline const char* experiment_mode_name(ExperimentMode m) {
  switch (m) {
    case ExperimentMode::slln:
      return "slln";
    case ExperimentMode::clt:
      return "clt";
    case ExperimentMode::mult_constant:
      return "mult_constant";
    default:
      return "mult_clt";
  }
}

struct TheoryResult {
  CltParams params;
  std::string moment_provenance;
};

namespace detail {

inline std::string weighted_provenance(const MomentSet& m) {
  if (m.mean_pf.available() && m.mean_pf.source == MomentSource::quadrature) {
    return "quadrature";
  }
  return "analytic";
}

inline CltParams degenerate_geometric(const MomentSet& m) {
  CltParams out;
  out.limit = std::exp(m.mean_logs.require("mean_logs"));
  out.scaling = ScalingRule::sqrt_n;
  out.centering = {out.limit, std::nullopt};
  out.asym_variance = 0.0;
  out.degenerate = true;
  return out;
}

}  // namespace detail

/// Theoretical limit parameters for a (mean kind, distribution) pair in
/// the requested regime. The multiplicative Cauchy quotient mean owns two
/// regimes: a deterministic ln(n) limit and a normal limit for ln(P_n)
/// with 1/ln(n) centering correction; the mode picks one.
inline TheoryResult theory_for(const MeanKind& kind,
                               const DistributionSpec& dist,
                               ExperimentMode mode) {
  validate(dist);
  return std::visit(
      [&](const auto& k) -> TheoryResult {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, QuasiArithmeticKind>) {
          const MomentSet m =
              bajraktarevic_moments(dist, k.generator, weights::one());
          return {bajraktarevic_clt_params(k.generator, m),
                  detail::weighted_provenance(m)};
        } else if constexpr (std::is_same_v<T, BajraktarevicKind>) {
          const MomentSet m =
              bajraktarevic_moments(dist, k.generator, k.weight);
          return {bajraktarevic_clt_params(k.generator, m),
                  detail::weighted_provenance(m)};
        } else if constexpr (std::is_same_v<T, GiniKind>) {
          const MomentSet m = gini_moment_set(dist, k.r, k.s);
          const Generator f = k.r == k.s ? generators::log()
                                         : generators::power(std::max(k.r, k.s) -
                                                             std::min(k.r, k.s));
          return {bajraktarevic_clt_params(f, m), detail::weighted_provenance(m)};
        } else if constexpr (std::is_same_v<T, HolderKind>) {
          const MomentSet m = gini_moment_set(dist, k.p, 0.0);
          const Generator f =
              k.p == 0.0 ? generators::log() : generators::power(std::abs(k.p));
          return {bajraktarevic_clt_params(f, m), detail::weighted_provenance(m)};
        } else if constexpr (std::is_same_v<T, ExpCauchyKind>) {
          const MomentSet m = analytic_moments(dist);
          if (mode == ExperimentMode::slln && m.var_logs.available() &&
              *m.var_logs.value == 0.0) {
            return {detail::degenerate_geometric(m), "analytic"};
          }
          return {exp_cauchy_clt_params(m), "analytic"};
        } else if constexpr (std::is_same_v<T, LogCauchyKind>) {
          const MomentSet m = analytic_moments(dist);
          return {log_cauchy_clt_params(m), "analytic"};
        } else {
          const MomentSet m = analytic_moments(dist);
          if (mode == ExperimentMode::mult_constant ||
              mode == ExperimentMode::slln) {
            return {mult_cauchy_constant_params(m), "analytic"};
          }
          return {mult_cauchy_clt_params(m), "analytic"};
        }
      },
      kind);
}

}  // namespace meanlab
