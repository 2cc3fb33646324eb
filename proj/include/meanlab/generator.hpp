#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include "meanlab/interval.hpp"

namespace meanlab {

enum class Monotonicity { increasing, decreasing };

/// Strictly monotone continuous map with an explicit inverse and derivative.
/// Numerical inversion is deliberately not provided: every generator carries
/// its own closed-form inverse.
struct Generator {
  std::string name;
  Interval domain;
  Monotonicity direction = Monotonicity::increasing;
  std::function<double(double)> eval;
  std::function<double(double)> inverse;
  std::function<double(double)> derivative;
};

/// Positive weight attached to each sample point.
struct WeightFunction {
  std::string name;
  Interval domain;
  std::function<double(double)> eval;
};

namespace generators {

inline Generator identity() {
  return {"identity",
          Interval::all(),
          Monotonicity::increasing,
          [](double x) { return x; },
          [](double u) { return u; },
          [](double) { return 1.0; }};
}

inline Generator log() {
  return {"log",
          Interval::positive(),
          Monotonicity::increasing,
          [](double x) { return std::log(x); },
          [](double u) { return std::exp(u); },
          [](double x) { return 1.0 / x; }};
}

inline Generator reciprocal() {
  return {"reciprocal",
          Interval::positive(),
          Monotonicity::decreasing,
          [](double x) { return 1.0 / x; },
          [](double u) { return 1.0 / u; },
          [](double x) { return -1.0 / (x * x); }};
}

/// x^p on (0, inf); decreasing for p < 0. p must be non-zero (use log()
/// for the p -> 0 limit).
inline Generator power(double p) {
  if (p == 0.0 || !std::isfinite(p)) {
    throw std::invalid_argument("power generator requires finite non-zero exponent");
  }
  return {"power(" + std::to_string(p) + ")",
          Interval::positive(),
          p > 0 ? Monotonicity::increasing : Monotonicity::decreasing,
          [p](double x) { return std::pow(x, p); },
          [p](double u) { return std::pow(u, 1.0 / p); },
          [p](double x) { return p * std::pow(x, p - 1.0); }};
}

/// a*g + b with a != 0. Generates the same quasi-arithmetic mean as g.
inline Generator affine_of(const Generator& g, double a, double b) {
  if (a == 0.0 || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("affine transform requires finite a != 0");
  }
  Generator out;
  out.name = "affine(" + g.name + ")";
  out.domain = g.domain;
  out.direction = (a > 0) == (g.direction == Monotonicity::increasing)
                      ? Monotonicity::increasing
                      : Monotonicity::decreasing;
  auto eval = g.eval;
  auto inverse = g.inverse;
  auto derivative = g.derivative;
  out.eval = [eval, a, b](double x) { return a * eval(x) + b; };
  out.inverse = [inverse, a, b](double u) { return inverse((u - b) / a); };
  out.derivative = [derivative, a](double x) { return a * derivative(x); };
  return out;
}

}  // namespace generators

namespace weights {

inline WeightFunction one() {
  return {"one", Interval::all(), [](double) { return 1.0; }};
}

inline WeightFunction identity() {
  return {"identity", Interval::positive(), [](double x) { return x; }};
}

inline WeightFunction power(double q) {
  return {"power(" + std::to_string(q) + ")", Interval::positive(),
          [q](double x) { return std::pow(x, q); }};
}

inline WeightFunction reciprocal() {
  return {"reciprocal", Interval::positive(), [](double x) { return 1.0 / x; }};
}

}  // namespace weights

}  // namespace meanlab
