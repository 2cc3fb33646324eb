#pragma once

#include <cmath>
#include <cstdint>

#include "meanlab/stats.hpp"

namespace meanlab {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based generator keyed by (seed, stream): draw k of stream s is
/// a pure function of (seed, s, k), so replicates can run on any thread
/// layout and still produce identical values.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(detail::mix64(seed + detail::kGolden) ^
             detail::mix64(stream * 0xC2B2AE3D27D4EB4Full + 0x165667B19E3779F9ull)) {}

  std::uint64_t next_u64() {
    counter_ += detail::kGolden;
    return detail::mix64(key_ + counter_);
  }

  /// Uniform draw in the open interval (0, 1).
  double next_unit() {
    for (;;) {
      const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  /// Exponential draw with the given rate; strictly positive.
  double next_exponential(double rate) { return -std::log(next_unit()) / rate; }

  /// Standard normal draw via the inverse CDF.
  double next_normal() { return normal_quantile(next_unit()); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace meanlab
