#pragma once

// Signed atomic measures: point atoms plus vertical segments in (t, x, v),
// and their (t, x) projections. These carry mu_0, mu_1 and the marginals
// nu_0, nu_1.

#include <map>
#include <tuple>
#include <vector>

#include "kinlab/util.hpp"

namespace kinlab {

struct Box3 {
  double t0, t1, x0, x1, v0, v1;
  bool contains(double t, double x, double v) const {
    return t >= t0 && t <= t1 && x >= x0 && x <= x1 && v >= v0 && v <= v1;
  }
  double volume() const { return (t1 - t0) * (x1 - x0) * (v1 - v0); }
};

// Measure on (t, x): point atoms only.
class AtomicMeasure2 {
 public:
  struct Atom {
    double t, x, w;
  };
  std::vector<Atom> atoms;

  void add(double t, double x, double w) {
    if (w != 0.0) atoms.push_back({t, x, w});
  }
  double total_variation() const {
    double s = 0.0;
    for (auto& a : atoms) s += std::abs(a.w);
    return s;
  }
  double mass() const {
    double s = 0.0;
    for (auto& a : atoms) s += a.w;
    return s;
  }
  double ball_mass(double t, double x, double r) const {
    double s = 0.0;
    for (auto& a : atoms)
      if (sq(a.t - t) + sq(a.x - x) <= r * r) s += a.w;
    return s;
  }
  double rect_mass(double t0, double t1, double x0, double x1) const {
    double s = 0.0;
    for (auto& a : atoms)
      if (a.t >= t0 && a.t <= t1 && a.x >= x0 && a.x <= x1) s += a.w;
    return s;
  }
};

class AtomicMeasure3 {
 public:
  struct Atom {
    double t, x, v, w;
  };
  // vertical segment {t} x {x} x [va, vb] with signed linear density rho
  struct VSegment {
    double t, x, va, vb, rho;
    double mass() const { return rho * (vb - va); }
  };

  std::vector<Atom> atoms;
  std::vector<VSegment> segments;

  void add_atom(double t, double x, double v, double w) {
    if (w != 0.0) atoms.push_back({t, x, v, w});
  }
  void add_segment(double t, double x, double va, double vb, double rho) {
    if (rho != 0.0 && vb > va) segments.push_back({t, x, va, vb, rho});
  }
  void append(const AtomicMeasure3& other) {
    atoms.insert(atoms.end(), other.atoms.begin(), other.atoms.end());
    segments.insert(segments.end(), other.segments.begin(), other.segments.end());
  }
  void scale(double c) {
    for (auto& a : atoms) a.w *= c;
    for (auto& s : segments) s.rho *= c;
  }

  double total_variation() const {
    double s = 0.0;
    for (auto& a : atoms) s += std::abs(a.w);
    for (auto& g : segments) s += std::abs(g.rho) * (g.vb - g.va);
    return s;
  }
  double mass() const {
    double s = 0.0;
    for (auto& a : atoms) s += a.w;
    for (auto& g : segments) s += g.mass();
    return s;
  }

  double box_mass(const Box3& B) const {
    double s = 0.0;
    for (auto& a : atoms)
      if (B.contains(a.t, a.x, a.v)) s += a.w;
    for (auto& g : segments)
      if (g.t >= B.t0 && g.t <= B.t1 && g.x >= B.x0 && g.x <= B.x1)
        s += g.rho * std::max(0.0, std::min(g.vb, B.v1) - std::max(g.va, B.v0));
    return s;
  }

  // density of the v-slice at level v over the (t,x) rectangle: sum of
  // segment densities whose span covers v (atoms are v-null)
  double slice_mass(double v, double t0, double t1, double x0, double x1) const {
    double s = 0.0;
    for (auto& g : segments)
      if (g.va <= v && v <= g.vb && g.t >= t0 && g.t <= t1 && g.x >= x0 && g.x <= x1)
        s += g.rho;
    return s;
  }

  AtomicMeasure3 restricted(const Box3& B) const {
    AtomicMeasure3 out;
    for (auto& a : atoms)
      if (B.contains(a.t, a.x, a.v)) out.atoms.push_back(a);
    for (auto& g : segments)
      if (g.t >= B.t0 && g.t <= B.t1 && g.x >= B.x0 && g.x <= B.x1) {
        double va = std::max(g.va, B.v0), vb = std::min(g.vb, B.v1);
        if (vb > va) out.segments.push_back({g.t, g.x, va, vb, g.rho});
      }
    return out;
  }

  AtomicMeasure3 positive_part() const {
    AtomicMeasure3 out;
    for (auto& a : atoms)
      if (a.w > 0) out.atoms.push_back(a);
    for (auto& g : segments)
      if (g.rho > 0) out.segments.push_back(g);
    return out;
  }
  AtomicMeasure3 negative_part() const {  // returned with positive weights
    AtomicMeasure3 out;
    for (auto& a : atoms)
      if (a.w < 0) out.atoms.push_back({a.t, a.x, a.v, -a.w});
    for (auto& g : segments)
      if (g.rho < 0) out.segments.push_back({g.t, g.x, g.va, g.vb, -g.rho});
    return out;
  }

  // pushforward under per-coordinate affine maps
  AtomicMeasure3 pushforward_affine(double at, double bt, double ax, double bx, double av,
                                    double bv) const {
    AtomicMeasure3 out = *this;
    for (auto& a : out.atoms) {
      a.t = at * a.t + bt;
      a.x = ax * a.x + bx;
      a.v = av * a.v + bv;
    }
    for (auto& g : out.segments) {
      g.t = at * g.t + bt;
      g.x = ax * g.x + bx;
      double va = av * g.va + bv, vb = av * g.vb + bv;
      if (va > vb) std::swap(va, vb);
      g.va = va;
      g.vb = vb;
      g.rho = g.rho / std::abs(av);
    }
    return out;
  }

  // (t,x) marginal of the total variation
  AtomicMeasure2 marginal_tx_tv() const {
    AtomicMeasure2 out;
    for (auto& a : atoms) out.add(a.t, a.x, std::abs(a.w));
    for (auto& g : segments) out.add(g.t, g.x, std::abs(g.rho) * (g.vb - g.va));
    return out;
  }
  AtomicMeasure2 marginal_tx_signed() const {
    AtomicMeasure2 out;
    for (auto& a : atoms) out.add(a.t, a.x, a.w);
    for (auto& g : segments) out.add(g.t, g.x, g.mass());
    return out;
  }

  // Merge atoms sharing the same (t,x,v) site and overlapping segments at the
  // same (t,x); opposite signs cancel. Sites are matched exactly: distinct
  // curve events land at distinct doubles unless constructed to coincide.
  void consolidate() {
    std::map<std::tuple<double, double, double>, double> amap;
    for (auto& a : atoms) amap[{a.t, a.x, a.v}] += a.w;
    atoms.clear();
    for (auto& [k, w] : amap)
      if (w != 0.0) atoms.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), w});

    std::map<std::pair<double, double>, std::vector<VSegment>> smap;
    for (auto& g : segments) smap[{g.t, g.x}].push_back(g);
    segments.clear();
    for (auto& [key, segs] : smap) {
      std::vector<double> cuts;
      for (auto& g : segs) {
        cuts.push_back(g.va);
        cuts.push_back(g.vb);
      }
      cuts = merge_breakpoints(std::move(cuts), 0.0);
      for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double rho = 0.0;
        double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        for (auto& g : segs)
          if (g.va <= mid && mid <= g.vb) rho += g.rho;
        if (rho != 0.0) segments.push_back({key.first, key.second, cuts[i], cuts[i + 1], rho});
      }
    }
  }
};

}  // namespace kinlab
