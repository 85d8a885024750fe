#pragma once

// Piecewise-constant functions of x with constant left/right extensions,
// plus the exact integral helpers the Besov and diagnostic code relies on.

#include <vector>

#include "kinlab/util.hpp"

namespace kinlab {

class PiecewiseConstantFn {
 public:
  PiecewiseConstantFn() : values_{0.0} {}

  // n breakpoints, n+1 cell values; value[i] rules (x[i-1], x[i]).
  PiecewiseConstantFn(std::vector<double> xs, std::vector<double> vals)
      : xs_(std::move(xs)), values_(std::move(vals)) {
    if (values_.size() != xs_.size() + 1)
      fail("domain", "need one more value than breakpoints");
    for (size_t i = 1; i < xs_.size(); ++i)
      if (!(xs_[i] > xs_[i - 1])) fail("domain", "breakpoints must increase");
    merge_equal();
  }

  static PiecewiseConstantFn constant(double c) { return PiecewiseConstantFn({}, {c}); }

  double operator()(double x) const {
    size_t k = std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin();
    return values_[k];
  }

  const std::vector<double>& breakpoints() const { return xs_; }
  const std::vector<double>& values() const { return values_; }

  double min_value() const { return *std::min_element(values_.begin(), values_.end()); }
  double max_value() const { return *std::max_element(values_.begin(), values_.end()); }

  double total_variation() const {
    double tv = 0.0;
    for (size_t i = 0; i + 1 < values_.size(); ++i)
      tv += std::abs(values_[i + 1] - values_[i]);
    return tv;
  }

  // integral over [a,b] of g(u(x)) dx, exact for the piecewise structure
  double integrate_cells(double a, double b,
                         const std::function<double(double)>& g) const {
    if (b <= a) return 0.0;
    double acc = 0.0;
    double left = a;
    for (size_t i = 0; i < xs_.size() && left < b; ++i) {
      if (xs_[i] <= left) continue;
      double right = std::min(xs_[i], b);
      acc += (right - left) * g(values_[i]);
      left = right;
    }
    if (left < b) acc += (b - left) * g(values_.back());
    return acc;
  }

  double integral(double a, double b) const {
    return integrate_cells(a, b, [](double u) { return u; });
  }

  // exact int_a^b |u(x+h) - u(x)|^p dx via merged breakpoints
  double shifted_difference_lp(double h, double a, double b, double p) const {
    std::vector<double> cuts;
    cuts.push_back(a);
    cuts.push_back(b);
    for (double x : xs_) {
      if (x > a && x < b) cuts.push_back(x);
      double xs = x - h;
      if (xs > a && xs < b) cuts.push_back(xs);
    }
    cuts = merge_breakpoints(std::move(cuts));
    double acc = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      double m = 0.5 * (cuts[i] + cuts[i + 1]);
      double d = std::abs((*this)(m + h) - (*this)(m));
      acc += (p == 1.0 ? d : std::pow(d, p)) * (cuts[i + 1] - cuts[i]);
    }
    return acc;
  }

  double l1_distance(const PiecewiseConstantFn& other, double a, double b) const {
    std::vector<double> cuts;
    cuts.push_back(a);
    cuts.push_back(b);
    for (double x : xs_)
      if (x > a && x < b) cuts.push_back(x);
    for (double x : other.xs_)
      if (x > a && x < b) cuts.push_back(x);
    cuts = merge_breakpoints(std::move(cuts));
    double acc = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      double m = 0.5 * (cuts[i] + cuts[i + 1]);
      acc += std::abs((*this)(m)-other(m)) * (cuts[i + 1] - cuts[i]);
    }
    return acc;
  }

 private:
  void merge_equal() {
    std::vector<double> xs, vals;
    vals.push_back(values_[0]);
    for (size_t i = 0; i < xs_.size(); ++i) {
      if (values_[i + 1] == vals.back()) continue;
      xs.push_back(xs_[i]);
      vals.push_back(values_[i + 1]);
    }
    xs_ = std::move(xs);
    values_ = std::move(vals);
  }

  std::vector<double> xs_;      // breakpoints
  std::vector<double> values_;  // cell values, size xs_.size()+1
};

}  // namespace kinlab
