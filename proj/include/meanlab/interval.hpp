#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace meanlab {

/// Real interval with individually open or closed endpoints.
/// Infinite endpoints are always treated as open.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_open = true;
  bool hi_open = true;

  static Interval all() { return {}; }

  static Interval open(double a, double b) { return {a, b, true, true}; }

  static Interval closed(double a, double b) { return {a, b, false, false}; }

  static Interval positive() {
    return {0.0, std::numeric_limits<double>::infinity(), true, true};
  }

  static Interval greater_than(double a) {
    return {a, std::numeric_limits<double>::infinity(), true, true};
  }

  bool contains(double x) const {
    if (std::isnan(x)) return false;
    if (lo_open ? !(x > lo) : !(x >= lo)) return false;
    if (hi_open ? !(x < hi) : !(x <= hi)) return false;
    return true;
  }

  /// True when every point of `inner` lies in this interval.
  bool covers(const Interval& inner) const {
    const bool lo_ok =
        inner.lo > lo || (inner.lo == lo && (inner.lo_open || !lo_open));
    const bool hi_ok =
        inner.hi < hi || (inner.hi == hi && (inner.hi_open || !hi_open));
    return lo_ok && hi_ok;
  }

  std::string describe() const {
    std::ostringstream os;
    os << (lo_open ? '(' : '[');
    if (std::isinf(lo)) {
      os << "-inf";
    } else {
      os << lo;
    }
    os << ", ";
    if (std::isinf(hi)) {
      os << "inf";
    } else {
      os << hi;
    }
    os << (hi_open ? ')' : ']');
    return os.str();
  }
};

}  // namespace meanlab
