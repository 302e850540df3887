#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "conslaw/interval.hpp"

namespace conslaw {

/// Piecewise-constant function on a closed interval [lo, hi].
///
/// The stored form is canonical: edges are strictly increasing and adjacent
/// pieces with exactly equal values are merged on construction, so two equal
/// functions compare equal regardless of how their breakpoints were listed.
/// Evaluation is right-continuous: piece i holds on [edge_i, edge_{i+1}),
/// and the last piece also covers the right endpoint.
class StepFunction {
 public:
  /// Constant function on [lo, hi].
  StepFunction(double lo, double hi, double value);

  /// General form: `breakpoints` are the interior jump locations, strictly
  /// increasing inside (lo, hi); `values` has one entry per piece, so
  /// values.size() == breakpoints.size() + 1.
  StepFunction(double lo, double hi, std::vector<double> breakpoints,
               std::vector<double> values);

  double domain_lo() const { return edges_.front(); }
  double domain_hi() const { return edges_.back(); }
  Interval domain() const { return {domain_lo(), domain_hi()}; }

  std::size_t piece_count() const { return values_.size(); }
  std::span<const double> edges() const { return edges_; }
  std::span<const double> values() const { return values_; }

  /// Right-continuous evaluation; accepts arguments a rounding error outside
  /// the domain, anything further is a domain error.
  double operator()(double x) const;

  /// Index of the piece containing x (same lookup rule as operator()).
  std::size_t piece_index(double x) const;

  double first_value() const { return values_.front(); }  // trace at lo+
  double last_value() const { return values_.back(); }    // trace at hi-

  /// Sum of absolute jumps across interior breakpoints.
  double total_variation() const;

  double l1_norm() const;
  double integrate(double a, double b) const;
  Interval value_range() const;

  /// Restriction to [a, b] as a new StepFunction. Jumps located exactly at a
  /// or b are dropped, i.e. the variation of the result is the variation
  /// measure of the open interval (a, b).
  StepFunction restricted(double a, double b) const;

  /// Same function on [lo, new_hi], the added tail holding `fill`.
  StepFunction extended(double new_hi, double fill) const;

  /// Right edge of the last piece with a nonzero value (domain_lo() if the
  /// function is identically zero). Values must be exact zeros to count.
  double support_hi() const;

  /// Exact L1 distance; both functions must share the same domain.
  double l1_distance(const StepFunction& other) const;

  bool operator==(const StepFunction&) const = default;

 private:
  std::vector<double> edges_;   // size piece_count() + 1
  std::vector<double> values_;  // size piece_count()
};

/// Sorted union of both edge lists (shared domain required).
std::vector<double> merged_edges(const StepFunction& a, const StepFunction& b);

}  // namespace conslaw
