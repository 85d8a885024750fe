#pragma once

// Lagrangian curves gamma = (gamma^x, gamma^v): piecewise-linear x-path,
// piecewise-constant v-path, and the per-curve kinetic measures.

#include <vector>

#include "kinlab/measures.hpp"
#include "kinlab/util.hpp"

namespace kinlab {

class Curve {
 public:
  // knots of the x-path: (t, x); times strictly increasing, first = t1, last = t2
  std::vector<std::pair<double, double>> x_knots;
  // plateaus of the v-path: (start time, value); first start = t1
  std::vector<std::pair<double, double>> v_plateaus;

  double t1() const { return x_knots.front().first; }
  double t2() const { return x_knots.back().first; }

  double x_at(double t) const {
    if (t <= x_knots.front().first) return x_knots.front().second;
    if (t >= x_knots.back().first) return x_knots.back().second;
    size_t k = 1;
    while (k < x_knots.size() && x_knots[k].first < t) ++k;
    auto [ta, xa] = x_knots[k - 1];
    auto [tb, xb] = x_knots[k];
    return xa + (xb - xa) * (t - ta) / (tb - ta);
  }

  // right-continuous value; v_at(t-) is the previous plateau at jump times
  double v_right(double t) const {
    size_t k = 0;
    while (k + 1 < v_plateaus.size() && v_plateaus[k + 1].first <= t) ++k;
    return v_plateaus[k].second;
  }
  double v_left(double t) const {
    size_t k = 0;
    while (k + 1 < v_plateaus.size() && v_plateaus[k + 1].first < t) ++k;
    return v_plateaus[k].second;
  }

  double v_start() const { return v_plateaus.front().second; }
  double v_end() const { return v_plateaus.back().second; }

  double total_variation_v() const {
    double tv = 0.0;
    for (size_t k = 0; k + 1 < v_plateaus.size(); ++k)
      tv += std::abs(v_plateaus[k + 1].second - v_plateaus[k].second);
    return tv;
  }

  struct Jump {
    double t, x, v_before, v_after;
  };
  std::vector<Jump> jumps() const {
    std::vector<Jump> out;
    for (size_t k = 1; k < v_plateaus.size(); ++k) {
      double t = v_plateaus[k].first;
      out.push_back({t, x_at(t), v_plateaus[k - 1].second, v_plateaus[k].second});
    }
    return out;
  }

  // time measure of {t in I : (t, x(t), v(t)) in B}
  double occupation_time(const Box3& B) const {
    double acc = 0.0;
    for (size_t k = 0; k + 1 < x_knots.size(); ++k) {
      auto [ta, xa] = x_knots[k];
      auto [tb, xb] = x_knots[k + 1];
      double lo = std::max(ta, B.t0), hi = std::min(tb, B.t1);
      if (hi <= lo) continue;
      double v = v_right(0.5 * (ta + tb));
      if (v < B.v0 || v > B.v1) continue;
      // x(t) linear on [ta, tb]: clip to the x-window
      double s = (xb - xa) / (tb - ta);
      auto xat = [&](double t) { return xa + s * (t - ta); };
      if (std::abs(s) < 1e-300) {
        if (xat(lo) >= B.x0 && xat(lo) <= B.x1) acc += hi - lo;
        continue;
      }
      double tA = (B.x0 - xa) / s + ta, tB = (B.x1 - xa) / s + ta;
      if (tA > tB) std::swap(tA, tB);
      acc += std::max(0.0, std::min({hi, tB}) - std::max({lo, tA}));
    }
    return acc;
  }
};

enum class FamilySide { Hypograph, Epigraph };

struct WeightedCurveFamily {
  std::vector<Curve> curves;
  std::vector<double> weights;
  FamilySide side = FamilySide::Hypograph;
  double T = 0.0;  // horizon; endpoints at 0 or T are boundary, not sources

  size_t size() const { return curves.size(); }
  void add(Curve c, double w) {
    curves.push_back(std::move(c));
    weights.push_back(w);
  }
  double total_weight() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
};

// Per-curve kinetic measures. The v-path is pure-jump, so the diffuse part
// of D gamma^v vanishes; each jump contributes a vertical segment with sign
// + for downward jumps and - for upward jumps, and the endpoints carry
// +delta at birth and -delta at death.
inline std::pair<AtomicMeasure3, AtomicMeasure3> curve_measures(const Curve& c,
                                                                double weight) {
  AtomicMeasure3 mu0, mu1;
  mu0.add_atom(c.t1(), c.x_at(c.t1()), c.v_start(), weight);
  mu0.add_atom(c.t2(), c.x_at(c.t2()), c.v_end(), -weight);
  for (const auto& j : c.jumps()) {
    double lo = std::min(j.v_before, j.v_after), hi = std::max(j.v_before, j.v_after);
    double sign = j.v_after < j.v_before ? 1.0 : -1.0;
    mu1.add_segment(j.t, j.x, lo, hi, sign * weight);
  }
  return {std::move(mu0), std::move(mu1)};
}

}  // namespace kinlab
