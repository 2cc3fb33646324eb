#pragma once

#include <cmath>
#include <span>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "meanlab/interval.hpp"

namespace meanlab {

enum class DomainTag { positive, greater_than_one, interval };

/// Ordered sample of real observations. Domain membership is enforced
/// strictly at construction; there is no epsilon slack, so e.g. a value
/// of exactly 1 is rejected under the greater-than-one tag.
class Sample {
 public:
  Sample(std::vector<double> values, DomainTag tag)
      : values_(std::move(values)), tag_(tag), interval_(interval_for(tag)) {
    if (tag == DomainTag::interval) {
      throw std::invalid_argument("interval-tagged samples need an explicit interval");
    }
    validate();
  }

  Sample(std::vector<double> values, const Interval& interval)
      : values_(std::move(values)), tag_(DomainTag::interval), interval_(interval) {
    validate();
  }

  std::span<const double> values() const { return values_; }
  DomainTag tag() const { return tag_; }
  const Interval& support() const { return interval_; }
  std::size_t size() const { return values_.size(); }

  double min() const {
    double m = values_.front();
    for (double v : values_) m = std::min(m, v);
    return m;
  }

  double max() const {
    double m = values_.front();
    for (double v : values_) m = std::max(m, v);
    return m;
  }

  bool all_equal() const {
    for (double v : values_) {
      if (v != values_.front()) return false;
    }
    return true;
  }

 private:
  static Interval interval_for(DomainTag tag) {
    switch (tag) {
      case DomainTag::positive:
        return Interval::positive();
      case DomainTag::greater_than_one:
        return Interval::greater_than(1.0);
      default:
        return Interval::all();
    }
  }

  void validate() const {
    if (values_.empty()) {
      throw std::invalid_argument("sample must contain at least one value");
    }
    for (double v : values_) {
      if (!std::isfinite(v) || !interval_.contains(v)) {
        std::ostringstream os;
        os << "sample value " << v << " outside required domain "
           << interval_.describe();
        throw std::domain_error(os.str());
      }
    }
  }

  std::vector<double> values_;
  DomainTag tag_;
  Interval interval_;
};

}  // namespace meanlab
