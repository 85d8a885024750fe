#pragma once

// Lagrangian representation of the hypograph/epigraph of a front-tracking
// solution: an explicit weighted curve family whose occupation measure
// reproduces chi, whose x-speed is the characteristic speed of its level,
// and whose jump bookkeeping induces the kinetic measures (mu_0, mu_1).
//
// Curve dynamics run against the representation flux F (the piecewise-linear
// flux the front tracker solves exactly). A curve at level v travels with
// slope F'(v); when it collides with a front whose trace interval contains v
// it jumps to the reflected level v* solving F(v) - sigma v = F(v*) - sigma v*
// on the other side of the sonic point. Where no reflected level exists the
// curve ends (quasi-entropy sources), and levels whose hypograph slab grows
// with no reflected supply spawn new curves along the front.

#include <optional>

#include "kinlab/bumps.hpp"
#include "kinlab/curves.hpp"
#include "kinlab/front_tracking.hpp"
#include "kinlab/measures.hpp"

namespace kinlab {

struct LagrangianOptions {
  double seed_dx = 0.0;   // 0: auto = window / max(1024, 4 N_v)
  double window_pad = 0.0;
  int max_events_per_curve = 100000;
};

namespace detail {

// reflected level: root of Phi(w) = Phi(v), Phi = F - sigma id, on the other
// monotonicity side of Phi within the closed trace interval
inline std::optional<double> reflect_level(const FluxSpec& F, double ul, double ur,
                                           double sigma, double v) {
  double a = std::min(ul, ur), b = std::max(ul, ur);
  auto phi = [&](double w) { return F.f(w) - sigma * w; };
  double target = phi(v);
  double sv = F.fp(v) - sigma;
  std::vector<double> nodes;
  nodes.push_back(a);
  for (double w : F.pl_breakpoints())
    if (w > a && w < b) nodes.push_back(w);
  nodes.push_back(b);
  nodes = merge_breakpoints(std::move(nodes), 0.0);
  std::optional<double> best;
  for (size_t k = 0; k + 1 < nodes.size(); ++k) {
    double pa = phi(nodes[k]) - target, pb = phi(nodes[k + 1]) - target;
    if ((pa > 0 && pb > 0) || (pa < 0 && pb < 0)) continue;
    double slope = (pb - pa) / (nodes[k + 1] - nodes[k]);
    if (slope * sv >= 0) continue;  // need the opposite side of the sonic point
    double w = std::abs(pb - pa) < 1e-300
                   ? nodes[k]
                   : nodes[k] + (0.0 - pa) / (pb - pa) * (nodes[k + 1] - nodes[k]);
    if (std::abs(w - v) < 1e-13) continue;
    if (!best || std::abs(w - v) < std::abs(*best - v)) best = w;
  }
  return best;
}

// Per-front reflection tables, built lazily; the per-query cost is one scan
// of the front's node table restricted to its trace interval.
class ReflectCache {
 public:
  ReflectCache(const FrontTrackingSolution& sol, const FluxSpec& F)
      : sol_(&sol), F_(&F), tables_(sol.fronts.size()) {}

  std::optional<double> reflect(int front_id, double v) {
    auto& tab = tables_[front_id];
    const Front& f = sol_->fronts[front_id];
    if (tab.nodes.empty()) {
      double a = std::min(f.ul, f.ur), b = std::max(f.ul, f.ur);
      tab.nodes.push_back(a);
      const auto& bp = F_->pl_breakpoints();
      auto it = std::upper_bound(bp.begin(), bp.end(), a);
      for (; it != bp.end() && *it < b; ++it) tab.nodes.push_back(*it);
      tab.nodes.push_back(b);
      tab.nodes = merge_breakpoints(std::move(tab.nodes), 0.0);
      tab.phi.resize(tab.nodes.size());
      for (size_t i = 0; i < tab.nodes.size(); ++i)
        tab.phi[i] = F_->f(tab.nodes[i]) - f.speed * tab.nodes[i];
    }
    double target = F_->f(v) - f.speed * v;
    double sv = F_->fp(v) - f.speed;
    std::optional<double> best;
    for (size_t k = 0; k + 1 < tab.nodes.size(); ++k) {
      double pa = tab.phi[k] - target, pb = tab.phi[k + 1] - target;
      if ((pa > 0 && pb > 0) || (pa < 0 && pb < 0)) continue;
      double slope = (pb - pa) / (tab.nodes[k + 1] - tab.nodes[k]);
      if (slope * sv >= 0) continue;
      double w = std::abs(pb - pa) < 1e-300
                     ? tab.nodes[k]
                     : tab.nodes[k] + (0.0 - pa) / (pb - pa) * (tab.nodes[k + 1] - tab.nodes[k]);
      if (std::abs(w - v) < 1e-13) continue;
      if (!best || std::abs(w - v) < std::abs(*best - v)) best = w;
    }
    return best;
  }

 private:
  struct Table {
    std::vector<double> nodes, phi;
  };
  const FrontTrackingSolution* sol_;
  const FluxSpec* F_;
  std::vector<Table> tables_;
};

struct FrontBuckets {
  // fronts bucketed by the v-interval they straddle
  double vlo, vhi;
  int nb;
  std::vector<std::vector<int>> bucket;

  FrontBuckets(const FrontTrackingSolution& sol, double lo, double hi, int n = 256)
      : vlo(lo), vhi(hi), nb(n), bucket(n) {
    for (const auto& f : sol.fronts) {
      double a = std::min(f.ul, f.ur), b = std::max(f.ul, f.ur);
      if (b - a <= 0) continue;
      int ka = idx(a), kb = idx(b);
      for (int k = ka; k <= kb; ++k) bucket[k].push_back(f.id);
    }
  }
  int idx(double v) const {
    int k = int((v - vlo) / (vhi - vlo) * nb);
    return std::min(std::max(k, 0), nb - 1);
  }
  const std::vector<int>& candidates(double v) const { return bucket[idx(v)]; }
};

struct Hit {
  double t, x;
  int front_id;
};

// first collision of the ray from (t0, x0) with slope s against fronts whose
// trace interval contains v
inline std::optional<Hit> first_hit(const FrontTrackingSolution& sol,
                                    const FrontBuckets& buckets, double t0, double x0,
                                    double v, double s) {
  std::optional<Hit> best;
  const double vtol = 1e-14;
  for (int id : buckets.candidates(v)) {
    const Front& f = sol.fronts[id];
    double a = std::min(f.ul, f.ur), b = std::max(f.ul, f.ur);
    if (v < a - vtol || v > b + vtol) continue;
    double rel = s - f.speed;
    if (std::abs(rel) < 1e-14) continue;
    double tc = t0 + (f.x_at(t0) - x0) / rel;
    if (tc <= t0 + kTimeTol) continue;
    if (tc < f.birth - kTimeTol || tc >= std::min(f.death, sol.T) + kTimeTol) continue;
    if (tc > sol.T + kTimeTol) continue;
    // ray-based position keeps the plateau slope exact to rounding
    if (!best || tc < best->t) best = Hit{tc, x0 + s * (tc - t0), id};
  }
  return best;
}

}  // namespace detail

// Traces one curve forward from (t0, x0, v0) to T through reflections.
// Returns the curve and whether it died at an unreflectable front.
inline std::pair<Curve, bool> trace_curve(const FrontTrackingSolution& sol,
                                          const FluxSpec& F,
                                          const detail::FrontBuckets& buckets,
                                          detail::ReflectCache& reflect, double t0,
                                          double x0, double v0, int max_events = 100000) {
  Curve c;
  c.x_knots.push_back({t0, x0});
  c.v_plateaus.push_back({t0, v0});
  double t = t0, x = x0, v = v0;
  bool died = false;
  for (int it = 0; it < max_events; ++it) {
    double s = F.fp(v);
    auto hit = detail::first_hit(sol, buckets, t, x, v, s);
    if (!hit) {
      c.x_knots.push_back({sol.T, x + s * (sol.T - t)});
      return {c, false};
    }
    c.x_knots.push_back({hit->t, hit->x});
    auto vstar = reflect.reflect(hit->front_id, v);
    if (!vstar) {
      died = true;
      break;
    }
    c.v_plateaus.push_back({hit->t, *vstar});
    t = hit->t;
    x = hit->x;
    v = *vstar;
  }
  return {c, died};
}

// Builds the hypograph representation with N_v midpoint levels of uniform
// weight. Curves are seeded at t = 0 with x-spacing seed_dx inside
// {u_0 >= v_j}, and along quasi-entropy fronts where the slab grows without
// reflected supply.
inline WeightedCurveFamily build_hypograph_rep(const FrontTrackingSolution& sol, int n_v,
                                               LagrangianOptions opt = {}) {
  if (n_v < 2) fail("domain", "need at least two levels");
  const FluxSpec F = sol.representation_flux();
  const double lo = sol.flux.lo(), hi = sol.flux.hi();
  auto [wlo, whi] = sol.front_window(sol.flux.max_abs_fp() * sol.T + opt.window_pad + 0.5);
  double seed_dx = opt.seed_dx > 0 ? opt.seed_dx : (whi - wlo) / std::max(1024, 4 * n_v);
  double level_w = (hi - lo) / n_v;  // v-mass carried per level

  WeightedCurveFamily fam;
  fam.side = FamilySide::Hypograph;
  fam.T = sol.T;
  detail::FrontBuckets buckets(sol, lo, hi);
  detail::ReflectCache reflect(sol, F);

  // only fronts off the Rankine-Hugoniot locus can demand curve births
  std::vector<int> nonrh_fronts;
  for (const auto& f : sol.fronts) {
    double defect = f.speed * f.jump() - (F.f(f.ur) - F.f(f.ul));
    if (std::abs(defect) > 1e-12 * std::max(1.0, F.max_abs_fp())) nonrh_fronts.push_back(f.id);
  }

  const auto& u0 = sol.initial;
  for (int j = 0; j < n_v; ++j) {
    double vj = lo + (hi - lo) * (j + 0.5) / n_v;
    // initial seeds on {u0 >= vj}
    const auto& xs = u0.breakpoints();
    const auto& vals = u0.values();
    for (size_t i = 0; i < vals.size(); ++i) {
      if (vals[i] < vj) continue;
      double a = i == 0 ? wlo : std::max(xs[i - 1], wlo);
      double b = i == xs.size() ? whi : std::min(xs[i], whi);
      if (b <= a) continue;
      int pieces = std::max(1, int(std::ceil((b - a) / seed_dx)));
      double w = (b - a) / pieces;
      for (int p = 0; p < pieces; ++p) {
        double x0 = a + (p + 0.5) * w;
        auto [curve, diedflag] = trace_curve(sol, F, buckets, reflect, 0.0, x0, vj,
                                             opt.max_events_per_curve);
        (void)diedflag;
        fam.add(std::move(curve), w * level_w);
      }
    }
    // births along fronts whose growing side has no reflected supply
    for (int id : nonrh_fronts) {
      const Front& f = sol.fronts[id];
      double a = std::min(f.ul, f.ur), b = std::max(f.ul, f.ur);
      if (vj <= a || vj >= b) continue;
      if (reflect.reflect(id, vj)) continue;  // supplied by reflections
      bool down = f.ul > f.ur;  // chi = 1 on the left side
      double rel = f.speed - F.fp(vj);
      bool grows = down ? rel > 0 : rel < 0;
      if (!grows) continue;
      double rate = std::abs(rel);
      double period = seed_dx / rate;
      double tend = std::min(f.death, sol.T);
      for (double ts = f.birth + 0.5 * period; ts < tend; ts += period) {
        auto [curve, diedflag] = trace_curve(sol, F, buckets, reflect, ts, f.x_at(ts), vj,
                                             opt.max_events_per_curve);
        (void)diedflag;
        fam.add(std::move(curve), seed_dx * level_w);
      }
    }
  }
  return fam;
}

// The reflected solution (lo+hi) - u with flux -f(lo+hi - .); same front
// geometry with swapped, mirrored trace values.
inline FrontTrackingSolution reflect_solution(const FrontTrackingSolution& sol) {
  FrontTrackingSolution out = sol;
  double s = sol.flux.lo() + sol.flux.hi();
  out.flux = sol.flux.reflected();
  for (auto& f : out.fronts) {
    f.ul = s - f.ul;
    f.ur = s - f.ur;
  }
  std::vector<double> vals;
  for (double v : sol.initial.values()) vals.push_back(s - v);
  out.initial = PiecewiseConstantFn(sol.initial.breakpoints(), vals);
  return out;
}

// Epigraph representation: hypograph machinery applied to the reflected
// solution, with curve levels mapped back by v -> lo+hi-v. Applying
// curve_measures to the mapped curves yields the epigraph-induced pair
// directly (jump directions flip, which carries the sign change).
inline WeightedCurveFamily build_epigraph_rep(const FrontTrackingSolution& sol, int n_v,
                                              LagrangianOptions opt = {}) {
  FrontTrackingSolution refl = reflect_solution(sol);
  WeightedCurveFamily fam = build_hypograph_rep(refl, n_v, opt);
  double s = sol.flux.lo() + sol.flux.hi();
  for (auto& c : fam.curves)
    for (auto& p : c.v_plateaus) p.second = s - p.second;
  fam.side = FamilySide::Epigraph;
  return fam;
}

// Aggregated kinetic measures of a family: consolidated sums of the
// per-curve measures.
inline std::pair<AtomicMeasure3, AtomicMeasure3> aggregate_measures(
    const WeightedCurveFamily& fam) {
  AtomicMeasure3 mu0, mu1;
  for (size_t i = 0; i < fam.size(); ++i) {
    auto [m0, m1] = curve_measures(fam.curves[i], fam.weights[i]);
    mu0.append(m0);
    mu1.append(m1);
  }
  mu0.consolidate();
  mu1.consolidate();
  return {std::move(mu0), std::move(mu1)};
}

// interior part: strictly inside (0, T) in time
inline AtomicMeasure3 interior_part(const AtomicMeasure3& m, double T,
                                    double tol = 1e-12) {
  Box3 B{tol, T - tol, -1e300, 1e300, -1e300, 1e300};
  return m.restricted(B);
}

// ---------------------------------------------------------------------------
// Kinetic balance residual.

// Composite Gauss-Legendre sweep over the solution's epochs; long epochs are
// split into panels no wider than panel_cap so smooth (bump-scale) factors in
// the integrand are resolved. The visitor receives (t, dt-weight, front ids
// sorted by position, positions).
template <class Visitor>
inline void epoch_gauss_sweep(const FrontTrackingSolution& sol, double panel_cap,
                              std::vector<double> extra_cuts, Visitor&& visit) {
  static const double gl_x[8] = {-0.9602898564975362, -0.7966664774136267,
                                 -0.5255324099163290, -0.1834346424956498,
                                 0.1834346424956498,  0.5255324099163290,
                                 0.7966664774136267,  0.9602898564975362};
  static const double gl_w[8] = {0.1012285362903763, 0.2223810344533745,
                                 0.3137066458778873, 0.3626837833783620,
                                 0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};
  std::vector<double> cuts{0.0, sol.T};
  for (const auto& e : sol.events)
    if (e.t > 0 && e.t < sol.T) cuts.push_back(e.t);
  for (double c : extra_cuts)
    if (c > 0 && c < sol.T) cuts.push_back(c);
  cuts = merge_breakpoints(std::move(cuts), 1e-14);

  std::vector<double> pos;
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    double a = cuts[k], b = cuts[k + 1];
    if (b - a < 1e-13) continue;
    auto ids = sol.active_at(0.5 * (a + b));
    pos.resize(ids.size());
    int panels = std::max(1, int(std::ceil((b - a) / panel_cap)));
    for (int p = 0; p < panels; ++p) {
      double pa = a + (b - a) * p / panels, pb = a + (b - a) * (p + 1) / panels;
      for (int g = 0; g < 8; ++g) {
        double t = 0.5 * (pa + pb) + 0.5 * (pb - pa) * gl_x[g];
        double w = 0.5 * (pb - pa) * gl_w[g];
        for (size_t i = 0; i < ids.size(); ++i) pos[i] = sol.fronts[ids[i]].x_at(t);
        visit(t, w, ids, pos);
      }
    }
  }
}

class KineticResidualEvaluator {
 public:
  // The transport term is assembled with the scenario flux f' (tabulated on a
  // fine grid for the exact v-antiderivatives), so the residual reports the
  // level quantization plus the dv-linearization gap of the curve dynamics.
  KineticResidualEvaluator(const FrontTrackingSolution& sol, std::vector<TestFn3> dict)
      : sol_(&sol),
        dict_(std::move(dict)),
        F_(sol.flux.linearized_at(linspace(sol.flux.lo(), sol.flux.hi(), 8193))) {
    precompute_chi_terms();
  }

  const std::vector<TestFn3>& dictionary() const { return dict_; }

  // max over the dictionary of | int chi (phi_t + F' phi_x) rho
  //                              - int phi rho' dmu1 + int phi rho dmu0 |
  double residual(const AtomicMeasure3& mu0, const AtomicMeasure3& mu1) const {
    double worst = 0.0;
    for (size_t k = 0; k < dict_.size(); ++k) {
      const auto& fn = dict_[k];
      double term1 = 0.0;
      for (const auto& g : mu1.segments)
        term1 += fn.tb.val(g.t) * fn.xb.val(g.x) * (fn.rho.val(g.vb) - fn.rho.val(g.va)) *
                 g.rho;
      for (const auto& a : mu1.atoms)
        term1 += fn.tb.val(a.t) * fn.xb.val(a.x) * fn.rho.deriv(a.v) * a.w;
      double term0 = 0.0;
      for (const auto& a : mu0.atoms)
        term0 += fn.tb.val(a.t) * fn.xb.val(a.x) * fn.rho.val(a.v) * a.w;
      worst = std::max(worst, std::abs(chi_term_[k] - term1 + term0));
    }
    return worst;
  }

 private:
  // chi term: int phi_t P(u) + phi_x Q(u) dx dt with P = int rho, Q = int F' rho
  void precompute_chi_terms() {
    // Q on the nodes of F
    const auto& nodes = F_.pl_breakpoints();
    chi_term_.assign(dict_.size(), 0.0);
    std::vector<std::vector<double>> Qnode(dict_.size(),
                                           std::vector<double>(nodes.size(), 0.0));
    for (size_t k = 0; k < dict_.size(); ++k)
      for (size_t i = 0; i + 1 < nodes.size(); ++i) {
        double chordk = F_.chord(nodes[i], nodes[i + 1]);
        Qnode[k][i + 1] = Qnode[k][i] + chordk * (dict_[k].rho.integral(nodes[i + 1]) -
                                                  dict_[k].rho.integral(nodes[i]));
      }
    auto Q = [&](size_t k, double u) {
      const auto& vs = nodes;
      if (u <= vs.front()) return 0.0;  // rho supported inside the domain
      size_t i = std::upper_bound(vs.begin(), vs.end(), u) - vs.begin();
      if (i >= vs.size()) return Qnode[k].back();
      --i;
      return Qnode[k][i] +
             F_.chord(vs[i], vs[i + 1]) *
                 (dict_[k].rho.integral(u) - dict_[k].rho.integral(vs[i]));
    };
    auto P = [&](size_t k, double u) { return dict_[k].rho.integral(u); };

    auto [wlo, whi] = sol_->front_window(1.0);
    double panel_cap = sol_->T;
    for (const auto& fn : dict_) panel_cap = std::min(panel_cap, 0.5 * fn.tb.r);
    epoch_gauss_sweep(*sol_, panel_cap, {}, [&](double t, double wt,
                                                const std::vector<int>& ids,
                                                const std::vector<double>& pos) {
      for (size_t k = 0; k < dict_.size(); ++k) {
        const auto& fn = dict_[k];
        double Tb = fn.tb.val(t), Tbp = fn.tb.deriv(t);
        if (Tb == 0.0 && Tbp == 0.0) continue;
        double acc_t = 0.0, acc_x = 0.0;
        double left = wlo;
        double u = ids.empty() ? sol_->far_left() : sol_->fronts[ids.front()].ul;
        for (size_t i = 0; i <= ids.size(); ++i) {
          double right = i == ids.size() ? whi : pos[i];
          if (right > left) {
            acc_t += P(k, u) * (fn.xb.integral(right) - fn.xb.integral(left));
            acc_x += Q(k, u) * (fn.xb.val(right) - fn.xb.val(left));
            left = right;
          } else if (right < left) {
            right = left;  // coincident fronts at interaction instants
          }
          if (i < ids.size()) u = sol_->fronts[ids[i]].ur;
        }
        chi_term_[k] += wt * (Tbp * acc_t + Tb * acc_x);
      }
    });
  }

  const FrontTrackingSolution* sol_;
  std::vector<TestFn3> dict_;
  FluxSpec F_;
  std::vector<double> chi_term_;
};

inline double kinetic_residual(const FrontTrackingSolution& sol, const AtomicMeasure3& mu0,
                               const AtomicMeasure3& mu1, std::vector<TestFn3> dict = {}) {
  if (dict.empty()) {
    auto [wlo, whi] = sol.front_window(0.0);
    dict = default_dictionary(sol.T, wlo, whi, sol.flux.lo(), sol.flux.hi());
  }
  return KineticResidualEvaluator(sol, std::move(dict)).residual(mu0, mu1);
}

// ---------------------------------------------------------------------------
// Reproduction identity (occupation measure vs chi) on sample boxes.

// Exact: between cuts the integrand t -> int_x clip(u) dx is linear (front
// positions move linearly, clipped at the box edges), so trapezoid rule per
// piece is exact. Cuts: events, box t-edges, and front crossings of the box
// x-edges.
inline double box_chi_integral(const FrontTrackingSolution& sol, const Box3& B) {
  std::vector<double> cuts{B.t0, B.t1};
  for (const auto& e : sol.events)
    if (e.t > B.t0 && e.t < B.t1) cuts.push_back(e.t);
  for (const auto& f : sol.fronts) {
    if (std::abs(f.speed) < 1e-300) continue;
    for (double edge : {B.x0, B.x1}) {
      double tc = f.birth + (edge - f.x_birth) / f.speed;
      if (tc > std::max(B.t0, f.birth) && tc < std::min({B.t1, f.death, sol.T}))
        cuts.push_back(tc);
    }
  }
  cuts = merge_breakpoints(std::move(cuts), 1e-14);

  auto inner = [&](double t) {
    auto ids = sol.active_at(t);
    double acc = 0.0;
    double left = B.x0;
    double u = ids.empty() ? sol.far_left() : sol.fronts[ids.front()].ul;
    for (size_t i = 0; i <= ids.size(); ++i) {
      double right =
          i == ids.size() ? B.x1 : std::min(std::max(sol.fronts[ids[i]].x_at(t), B.x0), B.x1);
      if (right > left) {
        acc += (right - left) * std::min(std::max(u - B.v0, 0.0), B.v1 - B.v0);
        left = right;
      }
      if (i < ids.size()) u = sol.fronts[ids[i]].ur;
    }
    return acc;
  };

  double acc = 0.0;
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    double a = cuts[k], b = cuts[k + 1];
    if (b - a < 1e-14) continue;
    double eps = std::min(1e-9, 0.25 * (b - a));
    acc += 0.5 * (inner(a + eps) + inner(b - eps)) * (b - a);
  }
  return acc;
}

struct ReproductionReport {
  double worst_abs = 0.0;
  double worst_rel_bound = 0.0;  // worst over boxes of |err| / allowance
};

// |sum_gamma w L1{t : (t, gamma(t)) in B} - int_B chi| per box, against the
// allowance 2 vol(B)/N_v + 2 seed_dx * (t-side + v-side)
inline ReproductionReport reproduction_check(const WeightedCurveFamily& fam,
                                             const FrontTrackingSolution& sol,
                                             const std::vector<Box3>& boxes, int n_v,
                                             double seed_dx) {
  ReproductionReport rep;
  for (const auto& B : boxes) {
    double occ = 0.0;
    for (size_t i = 0; i < fam.size(); ++i)
      occ += fam.weights[i] * fam.curves[i].occupation_time(B);
    double chi = box_chi_integral(sol, B);
    double err = std::abs(occ - chi);
    double allowance =
        2.0 * B.volume() / n_v + 2.0 * seed_dx * ((B.t1 - B.t0) + (B.v1 - B.v0));
    rep.worst_abs = std::max(rep.worst_abs, err);
    rep.worst_rel_bound = std::max(rep.worst_rel_bound, err / allowance);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Goodness (no cancellation) and simultaneity.

struct GoodnessReport {
  double mu1_cancellation = 0.0;  // sum |mu1^gamma| - |sum mu1^gamma|
  double mu0_cancellation = 0.0;
  double simultaneity_defect = 0.0;  // max over probe boxes of |hyp + epi|
  bool pass = true;
  std::vector<Box3> violations;
};

inline GoodnessReport goodness_check(const WeightedCurveFamily& fam_h,
                                     const WeightedCurveFamily& fam_e,
                                     double tol = 1e-9) {
  GoodnessReport rep;
  auto raw_tv = [](const WeightedCurveFamily& fam) {
    double tv0 = 0.0, tv1 = 0.0;
    for (size_t i = 0; i < fam.size(); ++i) {
      auto [m0, m1] = curve_measures(fam.curves[i], fam.weights[i]);
      tv0 += m0.total_variation();
      tv1 += m1.total_variation();
    }
    return std::pair{tv0, tv1};
  };
  auto [h0raw, h1raw] = raw_tv(fam_h);
  auto [h0, h1] = aggregate_measures(fam_h);
  rep.mu0_cancellation = h0raw - h0.total_variation();
  rep.mu1_cancellation = h1raw - h1.total_variation();

  // locate cancellation sites for the report
  if (rep.mu1_cancellation > tol * std::max(1.0, h1raw)) {
    std::map<std::pair<double, double>, std::pair<double, double>> site;  // +mass, -mass
    AtomicMeasure3 all;
    for (size_t i = 0; i < fam_h.size(); ++i) {
      auto [m0, m1] = curve_measures(fam_h.curves[i], fam_h.weights[i]);
      all.append(m1);
    }
    for (auto& g : all.segments) {
      auto& s = site[{g.t, g.x}];
      if (g.rho > 0)
        s.first += g.mass();
      else
        s.second -= g.mass();
    }
    for (auto& [k, s] : site)
      if (s.first > 0 && s.second > 0)
        rep.violations.push_back(Box3{k.first, k.first, k.second, k.second, 0.0, 1.0});
  }

  // simultaneity: epigraph-induced pair must be the negative of the
  // hypograph-induced pair; compared weakly on a probe box lattice
  auto [e0, e1] = aggregate_measures(fam_e);
  double T = fam_h.T;
  double xlo = 1e300, xhi = -1e300;
  for (auto& g : h1.segments) {
    xlo = std::min(xlo, g.x);
    xhi = std::max(xhi, g.x);
  }
  for (auto& g : e1.segments) {
    xlo = std::min(xlo, g.x);
    xhi = std::max(xhi, g.x);
  }
  if (xlo > xhi) {
    xlo = -1.0;
    xhi = 1.0;
  }
  double scale = std::max({h1.total_variation(), e1.total_variation(), 1e-30});
  for (int it = 0; it < 4; ++it)
    for (int ix = 0; ix < 6; ++ix) {
      Box3 B{T * it / 4.0 + 1e-9, T * (it + 1) / 4.0 - 1e-9,
             xlo + (xhi - xlo) * ix / 6.0 - 1e-9, xlo + (xhi - xlo) * (ix + 1) / 6.0 + 1e-9,
             -1e300, 1e300};
      rep.simultaneity_defect =
          std::max(rep.simultaneity_defect, std::abs(h1.box_mass(B) + e1.box_mass(B)));
      rep.simultaneity_defect =
          std::max(rep.simultaneity_defect,
                   std::abs(interior_part(h0, T).box_mass(B) +
                            interior_part(e0, T).box_mass(B)));
    }
  rep.simultaneity_defect /= scale;
  rep.pass = rep.mu1_cancellation <= tol * std::max(1.0, h1raw) &&
             rep.mu0_cancellation <= tol * std::max(1.0, h0raw) && rep.violations.empty();
  return rep;
}

}  // namespace kinlab
