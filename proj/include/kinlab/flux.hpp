#pragma once

// Flux functions on a closed state interval, entropy-entropy-flux algebra,
// the nonlinearity functionals h±, weak genuine nonlinearity testing and
// convexity-interval decomposition.

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "kinlab/util.hpp"

namespace kinlab {

enum class FluxKind { Burgers, Cubic, PiecewiseLinear, Custom };

class FluxSpec {
 public:
  using Fn = std::function<double(double)>;

  static FluxSpec burgers(double lo = 0.0, double hi = 1.0) {
    FluxSpec s;
    s.kind_ = FluxKind::Burgers;
    s.lo_ = lo;
    s.hi_ = hi;
    return s;
  }

  // f(v) = c3 v^3 + c2 v^2 + c1 v + c0
  static FluxSpec cubic(double c3, double c2, double c1, double c0, double lo = 0.0,
                        double hi = 1.0) {
    FluxSpec s;
    s.kind_ = FluxKind::Cubic;
    s.coef_ = {c0, c1, c2, c3};
    s.lo_ = lo;
    s.hi_ = hi;
    return s;
  }

  static FluxSpec affine(double c, double lo = 0.0, double hi = 1.0) {
    return cubic(0.0, 0.0, c, 0.0, lo, hi);
  }

  // Breakpoints strictly increasing and spanning [front, back].
  static FluxSpec piecewise_linear(std::vector<double> v, std::vector<double> fv) {
    if (v.size() != fv.size() || v.size() < 2)
      fail("domain", "piecewise linear flux needs matching tables, >= 2 points");
    for (size_t i = 1; i < v.size(); ++i)
      if (!(v[i] > v[i - 1])) fail("domain", "breakpoints must be strictly increasing");
    FluxSpec s;
    s.kind_ = FluxKind::PiecewiseLinear;
    s.lo_ = v.front();
    s.hi_ = v.back();
    s.pl_v_ = std::move(v);
    s.pl_f_ = std::move(fv);
    return s;
  }

  static FluxSpec custom(Fn f, Fn fp, Fn fpp, double lo, double hi) {
    FluxSpec s;
    s.kind_ = FluxKind::Custom;
    s.cf_ = std::move(f);
    s.cfp_ = std::move(fp);
    s.cfpp_ = std::move(fpp);
    s.lo_ = lo;
    s.hi_ = hi;
    return s;
  }

  FluxKind kind() const { return kind_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool in_domain(double v, double tol = 1e-12) const {
    return v >= lo_ - tol && v <= hi_ + tol;
  }

  double f(double v) const {
    switch (kind_) {
      case FluxKind::Burgers: return 0.5 * v * v;
      case FluxKind::Cubic: return ((coef_[3] * v + coef_[2]) * v + coef_[1]) * v + coef_[0];
      case FluxKind::PiecewiseLinear: {
        int k = piece(v);
        double t = (v - pl_v_[k]) / (pl_v_[k + 1] - pl_v_[k]);
        return pl_f_[k] + t * (pl_f_[k + 1] - pl_f_[k]);
      }
      case FluxKind::Custom: return cf_(v);
    }
    return 0.0;
  }

  // For piecewise-linear fluxes this is the left-limit chord at breakpoints,
  // so a value sitting exactly on a node gets the slope of the piece below.
  double fp(double v) const {
    switch (kind_) {
      case FluxKind::Burgers: return v;
      case FluxKind::Cubic: return (3.0 * coef_[3] * v + 2.0 * coef_[2]) * v + coef_[1];
      case FluxKind::PiecewiseLinear: {
        int k = piece(v);
        return (pl_f_[k + 1] - pl_f_[k]) / (pl_v_[k + 1] - pl_v_[k]);
      }
      case FluxKind::Custom: return cfp_(v);
    }
    return 0.0;
  }

  double fpp(double v) const {
    switch (kind_) {
      case FluxKind::Burgers: return 1.0;
      case FluxKind::Cubic: return 6.0 * coef_[3] * v + 2.0 * coef_[2];
      case FluxKind::PiecewiseLinear: return 0.0;  // a.e. value
      case FluxKind::Custom: return cfpp_(v);
    }
    return 0.0;
  }

  bool has_fpp() const { return kind_ != FluxKind::PiecewiseLinear; }

  double max_abs_fp(int samples = 2048) const {
    double m = 0.0;
    if (kind_ == FluxKind::PiecewiseLinear) {
      for (size_t k = 0; k + 1 < pl_v_.size(); ++k)
        m = std::max(m, std::abs((pl_f_[k + 1] - pl_f_[k]) / (pl_v_[k + 1] - pl_v_[k])));
      return m;
    }
    for (double v : linspace(lo_, hi_, samples)) m = std::max(m, std::abs(fp(v)));
    return m;
  }

  double max_abs_fpp(int samples = 2048) const {
    if (!has_fpp()) return 0.0;
    double m = 0.0;
    for (double v : linspace(lo_, hi_, samples)) m = std::max(m, std::abs(fpp(v)));
    return m;
  }

  // Chord slope (f(b) - f(a)) / (b - a); Rankine-Hugoniot speed of the jump (a, b).
  double chord(double a, double b) const {
    if (a == b) return fp(a);
    return (f(b) - f(a)) / (b - a);
  }

  // Linear interpolation of this flux at the given nodes (sorted, deduplicated).
  FluxSpec linearized_at(std::vector<double> nodes) const {
    nodes.push_back(lo_);
    nodes.push_back(hi_);
    nodes = merge_breakpoints(std::move(nodes), 1e-14 * (hi_ - lo_));
    std::vector<double> fv(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) fv[i] = f(nodes[i]);
    return piecewise_linear(std::move(nodes), std::move(fv));
  }

  // g(w) = -f(lo + hi - w): the flux of the reflected state lo+hi-u, used to
  // drive the epigraph construction through the hypograph machinery.
  FluxSpec reflected() const {
    double s = lo_ + hi_;
    if (kind_ == FluxKind::PiecewiseLinear) {
      std::vector<double> v(pl_v_.size()), fv(pl_v_.size());
      for (size_t i = 0; i < pl_v_.size(); ++i) {
        v[i] = s - pl_v_[pl_v_.size() - 1 - i];
        fv[i] = -pl_f_[pl_v_.size() - 1 - i];
      }
      return piecewise_linear(std::move(v), std::move(fv));
    }
    FluxSpec base = *this;
    return custom([base, s](double w) { return -base.f(s - w); },
                  [base, s](double w) { return base.fp(s - w); },
                  [base, s](double w) { return -base.fpp(s - w); }, lo_, hi_);
  }

  // Affine image on [0,1]; state v maps to (v - lo)/(hi - lo). Wave speeds in
  // (t,x) are preserved.
  FluxSpec rescaled_to_unit() const {
    double a = lo_, L = hi_ - lo_;
    if (a == 0.0 && L == 1.0) return *this;
    if (kind_ == FluxKind::PiecewiseLinear) {
      std::vector<double> v(pl_v_.size()), fv(pl_f_.size());
      for (size_t i = 0; i < pl_v_.size(); ++i) {
        v[i] = (pl_v_[i] - a) / L;
        fv[i] = pl_f_[i] / L;
      }
      return piecewise_linear(std::move(v), std::move(fv));
    }
    FluxSpec base = *this;
    return custom([base, a, L](double s) { return base.f(a + L * s) / L; },
                  [base, a, L](double s) { return base.fp(a + L * s); },
                  [base, a, L](double s) { return base.fpp(a + L * s) * L; }, 0.0, 1.0);
  }

  const std::vector<double>& pl_breakpoints() const { return pl_v_; }

 private:
  int piece(double v) const {
    // left-limit convention: node v_k belongs to piece [v_{k-1}, v_k]
    int n = int(pl_v_.size());
    if (v <= pl_v_[0]) return 0;
    if (v >= pl_v_[n - 1]) return n - 2;
    int k = int(std::upper_bound(pl_v_.begin(), pl_v_.end(), v) - pl_v_.begin()) - 1;
    if (k >= 1 && pl_v_[k] == v) --k;
    return std::min(k, n - 2);
  }

  FluxKind kind_ = FluxKind::Burgers;
  double lo_ = 0.0, hi_ = 1.0;
  std::array<double, 4> coef_{0, 0, 0, 0};
  std::vector<double> pl_v_, pl_f_;
  Fn cf_, cfp_, cfpp_;
};

struct EntropyPair {
  std::function<double(double)> eta, eta_p, eta_pp;
  std::function<double(double)> q;  // q(v) = int_anchor^v f'(s) eta'(s) ds
  double anchor = 0.0;
};

// Builds (eta, q) with q' = f' eta' by adaptive quadrature, anchored so that
// q(0) = 0 when 0 is inside the flux domain.
inline EntropyPair entropy_flux(const FluxSpec& flux, std::function<double(double)> eta,
                                std::function<double(double)> eta_p,
                                std::function<double(double)> eta_pp) {
  double anchor = (flux.lo() <= 0.0 && flux.hi() >= 0.0) ? 0.0 : flux.lo();
  EntropyPair pair;
  pair.eta = std::move(eta);
  pair.eta_p = eta_p;
  pair.eta_pp = std::move(eta_pp);
  pair.anchor = anchor;
  FluxSpec fx = flux;
  pair.q = [fx, eta_p, anchor](double v) {
    if (!fx.in_domain(v)) fail("domain", "entropy flux evaluated outside flux domain");
    return integrate([&](double s) { return fx.fp(s) * eta_p(s); }, anchor, v, 1e-13);
  };
  return pair;
}

// Measure of {v in window : |f'(vbar) - f'(v)| >= 2h}, by sign-change
// isolation on a fine grid plus bisection refinement of each interval end.
inline double level_excursion_measure(const FluxSpec& flux, double vbar, double wlo,
                                      double whi, double h, int grid = 10000) {
  double fpb = flux.fp(vbar);
  auto g = [&](double v) { return std::abs(fpb - flux.fp(v)) - 2.0 * h; };
  double dx = (whi - wlo) / grid;
  double measure = 0.0;
  double prev = g(wlo);
  double open_at = prev >= 0.0 ? wlo : std::numeric_limits<double>::quiet_NaN();
  for (int i = 1; i <= grid; ++i) {
    double x = wlo + i * dx;
    double cur = g(x);
    if (prev >= 0.0 && cur < 0.0) {
      double r = bisect(g, x - dx, x, 1e-15);
      measure += r - open_at;
      open_at = std::numeric_limits<double>::quiet_NaN();
    } else if (prev < 0.0 && cur >= 0.0) {
      open_at = bisect([&](double s) { return -g(s); }, x - dx, x, 1e-15);
    }
    prev = cur;
  }
  if (!std::isnan(open_at)) measure += whi - open_at;
  return measure;
}

enum class Side { minus, plus };

// h±(vbar, delta): the largest h > 0 with
//   L^1( window ∩ { |f'(vbar) - f'(v)| >= 2h } ) >= h,
// where window = (vbar-delta, vbar) for the minus side and (vbar, vbar+delta)
// for the plus side. Returns 0 when no such h exists (flat f').
inline double nondegeneracy_h(const FluxSpec& flux, double vbar, double delta, Side side) {
  if (!(delta > 0.0)) fail("width", "delta must be positive");
  double wlo = side == Side::minus ? vbar - delta : vbar;
  double whi = side == Side::minus ? vbar : vbar + delta;
  if (!flux.in_domain(wlo) || !flux.in_domain(whi))
    fail("domain", "h window escapes the flux domain");
  auto M = [&](double h) { return level_excursion_measure(flux, vbar, wlo, whi, h); };
  double hmax = 0.0;
  for (double v : linspace(wlo, whi, 4096))
    hmax = std::max(hmax, 0.5 * std::abs(flux.fp(vbar) - flux.fp(v)));
  hmax = std::max(hmax, delta);
  if (M(1e-300) <= 0.0) return 0.0;
  double lo = 0.0, hi = hmax;
  if (M(hmax) >= hmax) return hmax;
  for (int it = 0; it < 100 && (hi - lo) > 1e-13 * std::max(1.0, hi); ++it) {
    double mid = 0.5 * (lo + hi);
    if (M(mid) >= mid)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

struct WgnReport {
  bool pass = true;
  double worst_measure = 0.0;
  double xi = 0.0, tau = 0.0;  // worst direction
  double tolerance = 0.0;      // grid-cell tolerance used for pass/fail
};

// Weak genuine nonlinearity: every level set {tau + xi f'(v) = 0} must be
// Lebesgue-null. Directions are sampled uniformly on the half circle plus
// the data-driven candidates (1, -f'(v_k)) that can actually align with a
// plateau of f'; plateau cells of the grid count as level-set measure.
inline WgnReport wgn_test(const FluxSpec& flux, int direction_samples, int grid = 10000) {
  if (direction_samples < 8) fail("domain", "need at least 8 direction samples");
  WgnReport rep;
  double dx = (flux.hi() - flux.lo()) / grid;
  rep.tolerance = 3.0 * dx;
  double scale = std::max(1.0, flux.max_abs_fp());
  std::vector<std::pair<double, double>> dirs;
  for (int i = 0; i < direction_samples; ++i) {
    double theta = M_PI * (i + 0.5) / direction_samples;
    dirs.push_back({std::cos(theta), std::sin(theta)});
  }
  for (int i = 0; i < direction_samples; ++i) {
    double v = flux.lo() + (flux.hi() - flux.lo()) * (i + 0.5) / direction_samples;
    double n = std::hypot(1.0, flux.fp(v));
    dirs.push_back({1.0 / n, -flux.fp(v) / n});
  }
  for (auto [xi, tau] : dirs) {
    double flat_tol = 1e-9 * scale * std::max(std::abs(xi), 1e-6);
    double measure = 0.0;
    for (int k = 0; k < grid; ++k) {
      double v = flux.lo() + (k + 0.5) * dx;
      if (std::abs(tau + xi * flux.fp(v)) <= flat_tol) measure += dx;
    }
    if (measure > rep.worst_measure) {
      rep.worst_measure = measure;
      rep.xi = xi;
      rep.tau = tau;
    }
  }
  rep.pass = rep.worst_measure <= rep.tolerance;
  return rep;
}

struct ConvexityDecomposition {
  struct Interval {
    double lo, hi;
    int sign;  // +1 or -1, the sign of f'' on the interval
  };
  std::vector<Interval> intervals;                 // the sets A_l
  std::vector<std::pair<double, double>> residual; // where |f''| <= tol
  double tol = 0.0;
};

// Maximal sign-constant components of {|f''| > tol}; residual is everything
// else. Interval ends are refined by bisection on |f''| - tol.
inline ConvexityDecomposition convexity_intervals(const FluxSpec& flux, double tol = -1.0,
                                                  int grid = 10000) {
  ConvexityDecomposition out;
  if (!flux.has_fpp()) {
    out.tol = 0.0;
    out.residual.push_back({flux.lo(), flux.hi()});
    return out;
  }
  if (tol < 0.0) tol = 1e-9 * std::max(flux.max_abs_fpp(), 1e-300);
  out.tol = tol;
  double dx = (flux.hi() - flux.lo()) / grid;
  auto cls = [&](double v) -> int {
    double s = flux.fpp(v);
    if (s > tol) return 1;
    if (s < -tol) return -1;
    return 0;
  };
  auto refine = [&](double a, double b, int side) {
    // boundary between differing classes in [a,b]; bisect on |f''| - tol
    auto g = [&](double v) { return std::abs(flux.fpp(v)) - tol; };
    if ((g(a) >= 0) == (g(b) >= 0)) return 0.5 * (a + b);
    (void)side;
    return bisect([&](double v) { return (g(a) >= 0 ? 1.0 : -1.0) * g(v); }, a, b, 1e-14);
  };
  int cur = cls(flux.lo() + 0.5 * dx);
  double start = flux.lo();
  auto flush = [&](double upto, int klass) {
    if (upto <= start) return;
    if (klass == 0)
      out.residual.push_back({start, upto});
    else
      out.intervals.push_back({start, upto, klass});
    start = upto;
  };
  for (int k = 1; k < grid; ++k) {
    double v = flux.lo() + (k + 0.5) * dx;
    int c = cls(v);
    if (c != cur) {
      double edge = refine(v - dx, v, cur);
      flush(edge, cur);
      cur = c;
    }
  }
  flush(flux.hi(), cur);
  return out;
}

}  // namespace kinlab
