#pragma once

#include <algorithm>

namespace conslaw {

/// Closed interval [lo, hi]. Degenerate (lo == hi) is allowed.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  bool contains(const Interval& inner) const { return inner.lo >= lo && inner.hi <= hi; }

  Interval inflated(double margin) const { return {lo - margin, hi + margin}; }

  static Interval join(Interval a, Interval b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
  }
  /// Interval spanned by two values given in either order.
  static Interval spanning(double a, double b) {
    return {std::min(a, b), std::max(a, b)};
  }

  bool operator==(const Interval&) const = default;
};

}  // namespace conslaw
