#include "conslaw/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace conslaw {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double domain_slack(double lo, double hi) {
  return 1e-12 * (std::abs(lo) + std::abs(hi) + 1.0);
}

}  // namespace

StepFunction::StepFunction(double lo, double hi, double value)
    : StepFunction(lo, hi, {}, {value}) {}

StepFunction::StepFunction(double lo, double hi, std::vector<double> breakpoints,
                           std::vector<double> values) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi,
          "StepFunction: domain must be a finite interval with lo < hi");
  require(values.size() == breakpoints.size() + 1,
          "StepFunction: need exactly one value per piece");
  double prev = lo;
  for (double b : breakpoints) {
    require(std::isfinite(b) && b > prev && b < hi,
            "StepFunction: breakpoints must be strictly increasing inside the domain");
    prev = b;
  }
  for (double v : values)
    require(std::isfinite(v), "StepFunction: values must be finite");

  edges_.reserve(breakpoints.size() + 2);
  edges_.push_back(lo);
  values_.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values_.empty() && values_.back() == values[i]) {
      // merge equal neighbours: drop the breakpoint that separates them
    } else {
      if (i > 0) edges_.push_back(breakpoints[i - 1]);
      values_.push_back(values[i]);
    }
  }
  edges_.push_back(hi);
}

std::size_t StepFunction::piece_index(double x) const {
  const double slack = domain_slack(domain_lo(), domain_hi());
  if (x < domain_lo() - slack || x > domain_hi() + slack)
    throw std::domain_error("StepFunction: argument outside domain");
  if (x >= domain_hi()) return values_.size() - 1;
  if (x <= domain_lo()) return 0;
  auto it = std::upper_bound(edges_.begin() + 1, edges_.end() - 1, x);
  return static_cast<std::size_t>(it - edges_.begin()) - 1;
}

double StepFunction::operator()(double x) const { return values_[piece_index(x)]; }

double StepFunction::total_variation() const {
  double tv = 0.0;
  for (std::size_t i = 1; i < values_.size(); ++i)
    tv += std::abs(values_[i] - values_[i - 1]);
  return tv;
}

double StepFunction::l1_norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i)
    s += std::abs(values_[i]) * (edges_[i + 1] - edges_[i]);
  return s;
}

double StepFunction::integrate(double a, double b) const {
  const double slack = domain_slack(domain_lo(), domain_hi());
  if (a > b) std::swap(a, b);
  if (a < domain_lo() - slack || b > domain_hi() + slack)
    throw std::domain_error("StepFunction: integration range outside domain");
  a = std::max(a, domain_lo());
  b = std::min(b, domain_hi());
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double left = std::max(a, edges_[i]);
    const double right = std::min(b, edges_[i + 1]);
    if (right > left) s += values_[i] * (right - left);
  }
  return s;
}

Interval StepFunction::value_range() const {
  auto [mn, mx] = std::minmax_element(values_.begin(), values_.end());
  return {*mn, *mx};
}

StepFunction StepFunction::restricted(double a, double b) const {
  const double slack = domain_slack(domain_lo(), domain_hi());
  require(a < b, "StepFunction: restriction needs a < b");
  if (a < domain_lo() - slack || b > domain_hi() + slack)
    throw std::domain_error("StepFunction: restriction range outside domain");
  a = std::max(a, domain_lo());
  b = std::min(b, domain_hi());
  std::vector<double> bps, vals;
  vals.push_back((*this)(a));
  for (std::size_t i = 1; i < edges_.size() - 1; ++i) {
    if (edges_[i] > a && edges_[i] < b) {
      bps.push_back(edges_[i]);
      vals.push_back(values_[i]);
    }
  }
  return StepFunction(a, b, std::move(bps), std::move(vals));
}

StepFunction StepFunction::extended(double new_hi, double fill) const {
  require(new_hi > domain_hi(), "StepFunction: extension must enlarge the domain");
  std::vector<double> bps(edges_.begin() + 1, edges_.end());  // old hi becomes interior
  std::vector<double> vals = values_;
  vals.push_back(fill);
  return StepFunction(domain_lo(), new_hi, std::move(bps), std::move(vals));
}

double StepFunction::support_hi() const {
  for (std::size_t i = values_.size(); i-- > 0;) {
    if (values_[i] != 0.0) return edges_[i + 1];
  }
  return domain_lo();
}

double StepFunction::l1_distance(const StepFunction& other) const {
  const auto grid = merged_edges(*this, other);
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double mid = 0.5 * (grid[i] + grid[i + 1]);
    s += std::abs((*this)(mid)-other(mid)) * (grid[i + 1] - grid[i]);
  }
  return s;
}

std::vector<double> merged_edges(const StepFunction& a, const StepFunction& b) {
  if (a.domain_lo() != b.domain_lo() || a.domain_hi() != b.domain_hi())
    throw std::invalid_argument("StepFunction: domains must coincide");
  std::vector<double> grid;
  grid.reserve(a.edges().size() + b.edges().size());
  std::merge(a.edges().begin(), a.edges().end(), b.edges().begin(), b.edges().end(),
             std::back_inserter(grid));
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace conslaw
