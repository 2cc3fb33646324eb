#pragma once

#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

#include "meanlab/distribution.hpp"
#include "meanlab/rng.hpp"
#include "meanlab/sample.hpp"

namespace meanlab {

namespace detail {

// Draws that land on a support boundary (possible only through floating
// rounding or overflow) are redrawn a bounded number of times.
inline constexpr int kMaxRedraws = 128;

template <class DrawFn>
double draw_strict(const Interval& support, DrawFn&& draw) {
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    const double v = draw();
    if (std::isfinite(v) && support.contains(v)) return v;
  }
  throw std::range_error("sampling: support boundary redraw limit exceeded");
}

}  // namespace detail

/// n i.i.d. draws from the distribution; deterministic given the stream
/// state. Every value satisfies the support strictly.
inline Sample draw_sample(const DistributionSpec& dist, std::size_t n,
                          CounterRng& rng) {
  if (n < 1) throw std::invalid_argument("draw_sample: n must be at least 1");
  std::vector<double> values(n);
  const DomainTag tag = support_tag(dist);
  const Interval support = tag == DomainTag::greater_than_one
                               ? Interval::greater_than(1.0)
                               : Interval::positive();
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ExpLogDist>) {
          for (auto& v : values) {
            v = detail::draw_strict(support, [&] {
              return std::exp(rng.next_exponential(d.rate));
            });
          }
        } else if constexpr (std::is_same_v<T, LogNormalDist>) {
          for (auto& v : values) {
            v = detail::draw_strict(support, [&] {
              return std::exp(d.mu + d.sigma * rng.next_normal());
            });
          }
        } else if constexpr (std::is_same_v<T, ShiftedLogNormalDist>) {
          for (auto& v : values) {
            v = detail::draw_strict(support, [&] {
              return 1.0 + std::exp(d.mu + d.sigma * rng.next_normal());
            });
          }
        } else if constexpr (std::is_same_v<T, UniformDist>) {
          const Interval open = Interval::open(d.a, d.b);
          for (auto& v : values) {
            v = detail::draw_strict(open, [&] {
              return d.a + (d.b - d.a) * rng.next_unit();
            });
          }
        } else {
          for (auto& v : values) v = d.c;
        }
      },
      dist);
  return Sample(std::move(values), tag);
}

}  // namespace meanlab
