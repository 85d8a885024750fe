#pragma once

// Exact front tracking for 1-D scalar conservation laws with piecewise
// constant data. Every Riemann problem is discretized on a value ladder of
// step <= dv; each resulting jump moves at its exact Rankine-Hugoniot speed,
// so the produced field is an exact weak solution of the flux linearized at
// the solution value set, and conservation holds to rounding.

#include <cmath>
#include <map>
#include <optional>
#include <queue>
#include <set>

#include "kinlab/flux.hpp"
#include "kinlab/piecewise.hpp"
#include "kinlab/util.hpp"

namespace kinlab {

// ---------------------------------------------------------------------------
// Continuum Riemann fan (API-level description).

struct WaveFan {
  struct Wave {
    enum class Type { Shock, Rarefaction } type;
    double ul, ur;
    double s_lo, s_hi;  // shock: s_lo == s_hi == sigma
  };
  std::vector<Wave> waves;  // speeds nondecreasing left to right
};

namespace detail {

// Lower convex hull indices of the graph points (v[i], fv[i]), v increasing.
inline std::vector<int> lower_hull(const std::vector<double>& v,
                                   const std::vector<double>& fv) {
  std::vector<int> h;
  for (int i = 0; i < int(v.size()); ++i) {
    while (h.size() >= 2) {
      int a = h[h.size() - 2], b = h[h.size() - 1];
      double cross = (v[b] - v[a]) * (fv[i] - fv[a]) - (v[i] - v[a]) * (fv[b] - fv[a]);
      if (cross <= 0.0)
        h.pop_back();
      else
        break;
    }
    h.push_back(i);
  }
  return h;
}

inline std::vector<double> riemann_ladder(double ul, double ur, double dv) {
  int m = std::max(1, int(std::ceil(std::abs(ur - ul) / dv - 1e-12)));
  std::vector<double> w(m + 1);
  for (int j = 0; j <= m; ++j) w[j] = ul + (ur - ul) * j / double(m);
  return w;
}

}  // namespace detail

// forward declaration; defined with the discrete machinery below
inline WaveFan solve_riemann_scalar(const FluxSpec& flux, double ul, double ur,
                                    int grid = 4096);

// ---------------------------------------------------------------------------
// Discrete front tracking.

struct Front {
  enum class Kind { Shock, FanFront, Contact };
  int id = -1;
  double birth = 0.0;
  double death = std::numeric_limits<double>::infinity();
  double x_birth = 0.0;
  double speed = 0.0;
  double ul = 0.0, ur = 0.0;
  Kind kind = Kind::Shock;

  double x_at(double t) const { return x_birth + speed * (t - birth); }
  double jump() const { return ur - ul; }
  bool alive_at(double t) const { return t >= birth - kTimeTol && t < death - kTimeTol; }
};

struct InteractionEvent {
  double t = 0.0, x = 0.0;
  std::vector<int> incoming, outgoing;
};

struct FrontTrackParams {
  double dv = 1.0 / 256.0;
  int max_fronts = 2'000'000;
};

class FrontTrackingSolution {
 public:
  std::vector<Front> fronts;
  std::vector<InteractionEvent> events;
  double T = 0.0;
  FluxSpec flux = FluxSpec::burgers();
  FrontTrackParams params;
  PiecewiseConstantFn initial;

  // fronts alive at time t, sorted by position
  std::vector<int> active_at(double t) const {
    std::vector<int> ids;
    for (const auto& f : fronts)
      if (f.alive_at(t)) ids.push_back(f.id);
    std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
      double xa = fronts[a].x_at(t), xb = fronts[b].x_at(t);
      if (xa != xb) return xa < xb;
      return fronts[a].speed < fronts[b].speed;
    });
    return ids;
  }

  PiecewiseConstantFn at_time(double t) const {
    auto ids = active_at(t);
    if (ids.empty()) return PiecewiseConstantFn::constant(far_left());
    std::vector<double> xs, vals;
    vals.push_back(fronts[ids.front()].ul);
    for (int id : ids) {
      xs.push_back(fronts[id].x_at(t));
      vals.push_back(fronts[id].ur);
    }
    // guard against coincident positions at interaction instants
    for (size_t i = 1; i < xs.size(); ++i)
      if (xs[i] <= xs[i - 1]) xs[i] = std::nextafter(xs[i - 1], 1e300);
    return PiecewiseConstantFn(std::move(xs), std::move(vals));
  }

  double far_left() const { return initial.values().front(); }
  double far_right() const { return initial.values().back(); }

  // window certainly containing every front over [0, T]
  std::pair<double, double> front_window(double pad = 0.0) const {
    double lo = 1e300, hi = -1e300;
    if (initial.breakpoints().empty()) return {-1.0 - pad, 1.0 + pad};
    double m = flux.max_abs_fp();
    lo = initial.breakpoints().front() - m * T - pad;
    hi = initial.breakpoints().back() + m * T + pad;
    return {lo, hi};
  }

  // all state values the solution ever takes
  std::vector<double> value_set() const {
    std::vector<double> v(initial.values());
    for (const auto& f : fronts) {
      v.push_back(f.ul);
      v.push_back(f.ur);
    }
    return merge_breakpoints(std::move(v), 0.0);
  }

  // The flux whose exact weak solution this front list is: the linear
  // interpolation of `flux` at the solution values plus a uniform dv grid.
  FluxSpec representation_flux() const {
    std::vector<double> nodes = value_set();
    int n = std::max(2, int(std::round((flux.hi() - flux.lo()) / params.dv)));
    for (int i = 0; i <= n; ++i)
      nodes.push_back(flux.lo() + (flux.hi() - flux.lo()) * i / double(n));
    return flux.linearized_at(std::move(nodes));
  }

  //  int_W u(t) dx - int_W u(0) dx - t (f(uL) - f(uR)), exactly zero for a
  //  conservative evolution (W is the front window).
  double mass_drift(double t) const {
    auto [lo, hi] = front_window(1.0);
    double now = at_time(t).integral(lo, hi);
    double init = initial.integral(lo, hi);
    return now - init - t * (flux.f(far_left()) - flux.f(far_right()));
  }
};

namespace detail {

struct DiscreteWave {
  double ul, ur, speed;
  Front::Kind kind;
};

// Riemann solution on an equal-step ladder between ul and ur; every hull edge
// becomes one front with exact chord speed.
inline std::vector<DiscreteWave> riemann_fronts(const FluxSpec& flux, double ul, double ur,
                                                double dv) {
  std::vector<DiscreteWave> out;
  if (ul == ur) return out;
  std::vector<double> w = riemann_ladder(ul, ur, dv);
  std::vector<double> v = w, fv(w.size());
  bool increasing = ul < ur;
  if (!increasing) std::reverse(v.begin(), v.end());
  for (size_t i = 0; i < v.size(); ++i) fv[i] = flux.f(v[i]);
  if (!increasing)
    for (auto& y : fv) y = -y;
  std::vector<int> hull = lower_hull(v, fv);
  double contact_tol = 1e-13 * std::max(1.0, flux.max_abs_fp());
  std::vector<DiscreteWave> waves;
  for (size_t k = 0; k + 1 < hull.size(); ++k) {
    int ia = hull[k], ib = hull[k + 1];
    DiscreteWave dwv;
    double a = v[ia], b = v[ib];
    dwv.speed = flux.chord(a, b);
    if (increasing) {
      dwv.ul = a;
      dwv.ur = b;
    } else {
      dwv.ul = b;  // traversing from ul (largest) down
      dwv.ur = a;
    }
    // classify: multi-cell hull edge = shock; single-cell edge = fan front
    // unless the flux is exactly linear across it (contact)
    if (ib - ia > 1) {
      dwv.kind = Front::Kind::Shock;
    } else {
      double mid = 0.5 * (a + b);
      double gap = std::abs(flux.f(mid) - 0.5 * (flux.f(a) + flux.f(b)));
      dwv.kind = gap <= contact_tol
                     ? Front::Kind::Contact
                     : (dwv.ur > dwv.ul ? Front::Kind::FanFront : Front::Kind::Shock);
    }
    waves.push_back(dwv);
  }
  if (!increasing) std::reverse(waves.begin(), waves.end());
  return waves;
}

}  // namespace detail

// Self-similar entropy solution described by the convex (ul < ur) or concave
// (ul > ur) envelope of f between the states: shocks where the envelope
// detaches from the graph, rarefactions where it touches.
inline WaveFan solve_riemann_scalar(const FluxSpec& flux, double ul, double ur, int grid) {
  if (!flux.in_domain(ul) || !flux.in_domain(ur))
    fail("domain", "Riemann data outside flux domain");
  WaveFan fan;
  if (ul == ur) return fan;
  double dv = std::abs(ur - ul) / grid;
  auto waves = detail::riemann_fronts(flux, ul, ur, dv);
  size_t k = 0;
  while (k < waves.size()) {
    if (waves[k].kind == Front::Kind::Shock) {
      WaveFan::Wave w;
      w.type = WaveFan::Wave::Type::Shock;
      w.ul = waves[k].ul;
      w.ur = waves[k].ur;
      w.s_lo = w.s_hi = flux.chord(w.ul, w.ur);
      fan.waves.push_back(w);
      ++k;
    } else {
      size_t j = k;
      while (j + 1 < waves.size() && waves[j + 1].kind != Front::Kind::Shock &&
             waves[j + 1].ul == waves[j].ur)
        ++j;
      WaveFan::Wave w;
      w.type = WaveFan::Wave::Type::Rarefaction;
      w.ul = waves[k].ul;
      w.ur = waves[j].ur;
      w.s_lo = std::min(flux.fp(w.ul), flux.fp(w.ur));
      w.s_hi = std::max(flux.fp(w.ul), flux.fp(w.ur));
      fan.waves.push_back(w);
      k = j + 1;
    }
  }
  return fan;
}

// Event-driven exact solver. Simultaneous collisions are processed leftmost
// first; equal-value neighbors annihilate through the Riemann re-solve.
inline FrontTrackingSolution front_track(const PiecewiseConstantFn& initial,
                                         const FluxSpec& flux, double T,
                                         FrontTrackParams params = {}) {
  if (!(params.dv > 0)) fail("width", "dv must be positive");
  for (double v : initial.values())
    if (!flux.in_domain(v)) fail("domain", "initial datum outside flux domain");

  FrontTrackingSolution sol;
  sol.T = T;
  sol.flux = flux;
  sol.params = params;
  sol.initial = initial;

  // neighbor links among alive fronts, by id
  std::vector<int> prev, next;
  auto alloc_front = [&](double t, double x, const detail::DiscreteWave& w) {
    Front f;
    f.id = int(sol.fronts.size());
    f.birth = t;
    f.x_birth = x;
    f.speed = w.speed;
    f.ul = w.ul;
    f.ur = w.ur;
    f.kind = w.kind;
    sol.fronts.push_back(f);
    prev.push_back(-1);
    next.push_back(-1);
    return f.id;
  };

  struct QEntry {
    double t, x;
    int left, right;
    bool operator>(const QEntry& o) const {
      if (t != o.t) return t > o.t;
      return x > o.x;  // leftmost first on ties
    }
  };
  std::priority_queue<QEntry, std::vector<QEntry>, std::greater<QEntry>> queue;

  auto schedule = [&](int l, int r, double tnow) {
    if (l < 0 || r < 0) return;
    const Front &L = sol.fronts[l], &R = sol.fronts[r];
    double rel = L.speed - R.speed;
    double gap = R.x_at(tnow) - L.x_at(tnow);
    if (rel <= 1e-15) return;
    double tc = tnow + std::max(0.0, gap) / rel;
    if (tc > T + kTimeTol) return;
    queue.push({tc, L.x_at(tc), l, r});
  };

  // seed: Riemann problem at each initial breakpoint
  int head = -1, tail = -1;
  for (size_t i = 0; i < initial.breakpoints().size(); ++i) {
    double x0 = initial.breakpoints()[i];
    auto waves = detail::riemann_fronts(flux, initial.values()[i], initial.values()[i + 1],
                                        params.dv);
    for (const auto& w : waves) {
      int id = alloc_front(0.0, x0, w);
      if (tail >= 0) {
        next[tail] = id;
        prev[id] = tail;
      } else {
        head = id;
      }
      tail = id;
    }
  }
  (void)head;
  for (int id = 0; id < int(sol.fronts.size()); ++id)
    if (next[id] >= 0) schedule(id, next[id], 0.0);

  while (!queue.empty()) {
    QEntry e = queue.top();
    queue.pop();
    const Front &L = sol.fronts[e.left], &R = sol.fronts[e.right];
    // lazy invalidation
    if (!L.alive_at(e.t) || !R.alive_at(e.t)) continue;
    if (next[e.left] != e.right) continue;
    if (e.t > T + kTimeTol) break;
    double t = std::min(e.t, T);
    double x = 0.5 * (L.x_at(t) + R.x_at(t));

    // gather the full chain of fronts meeting at (t, x)
    int first = e.left;
    while (prev[first] >= 0 &&
           std::abs(sol.fronts[prev[first]].x_at(t) - x) <= 1e-12 * (1.0 + std::abs(x)) &&
           sol.fronts[prev[first]].speed > sol.fronts[first].speed)
      first = prev[first];
    int last = e.right;
    while (next[last] >= 0 &&
           std::abs(sol.fronts[next[last]].x_at(t) - x) <= 1e-12 * (1.0 + std::abs(x)) &&
           sol.fronts[next[last]].speed < sol.fronts[last].speed)
      last = next[last];

    InteractionEvent ev;
    ev.t = t;
    ev.x = x;
    double ul = sol.fronts[first].ul, ur = sol.fronts[last].ur;
    int before = prev[first], after = next[last];
    for (int id = first;; id = next[id]) {
      sol.fronts[id].death = t;
      ev.incoming.push_back(id);
      if (id == last) break;
    }

    auto waves = detail::riemann_fronts(flux, ul, ur, params.dv);
    int link = before;
    for (const auto& w : waves) {
      int id = alloc_front(t, x, w);
      ev.outgoing.push_back(id);
      prev[id] = link;
      if (link >= 0)
        next[link] = id;
      link = id;
    }
    if (link >= 0) next[link] = after;
    if (after >= 0) prev[after] = link;

    if (int(sol.fronts.size()) > params.max_fronts)
      fail("complexity budget", "front count exceeded max_fronts");

    if (before >= 0 && next[before] >= 0) schedule(before, next[before], t);
    for (int id : ev.outgoing)
      if (next[id] >= 0) schedule(id, next[id], t);
    if (ev.outgoing.empty() && before >= 0 && after >= 0) schedule(before, after, t);
    sol.events.push_back(std::move(ev));
  }

  // surviving fronts keep death = +inf so that queries at exactly t = T work;
  // exporters clamp to T
  return sol;
}

// Characteristic-consistent probe stations for u(t, .): each cell is sampled
// at a point whose backward characteristic foot y - f'(w) t lands where the
// initial datum actually takes the value w (a cell of value w, or an upward
// jump crossing w). Cells with no consistent foot are transient front-scale
// microstructure and are skipped.
inline std::vector<double> oleinik_probe_stations(const FrontTrackingSolution& sol,
                                                  double t) {
  auto u0 = sol.initial;
  auto ids = sol.active_at(t);
  auto [wlo, whi] = sol.front_window(1.0);
  std::vector<double> stations;
  if (ids.empty()) return {wlo, whi};

  const double vtol = 1e-12;
  // foot candidates where u0 takes value w: exact-value cells and up-jumps
  auto foot_in = [&](double w, double flo, double fhi) -> std::optional<double> {
    const auto& xs = u0.breakpoints();
    const auto& vals = u0.values();
    // cells with value w
    for (size_t i = 0; i < vals.size(); ++i) {
      double a = i == 0 ? wlo - 1.0 : xs[i - 1];
      double b = i == xs.size() ? whi + 1.0 : xs[i];
      if (std::abs(vals[i] - w) <= vtol) {
        double lo = std::max(a, flo), hi = std::min(b, fhi);
        if (lo <= hi) return 0.5 * (lo + hi);
      }
    }
    // upward jumps crossing w
    for (size_t i = 0; i < xs.size(); ++i) {
      if (vals[i] < w - vtol && vals[i + 1] > w + vtol && xs[i] >= flo - 1e-14 &&
          xs[i] <= fhi + 1e-14)
        return xs[i];
    }
    return std::nullopt;
  };

  std::vector<double> edges;
  for (int id : ids) edges.push_back(sol.fronts[id].x_at(t));
  for (size_t c = 0; c <= edges.size(); ++c) {
    double xl = c == 0 ? wlo : edges[c - 1];
    double xr = c == edges.size() ? whi : edges[c];
    if (xr - xl <= 1e-13) continue;
    double w = c == 0 ? sol.fronts[ids[0]].ul : sol.fronts[ids[c - 1]].ur;
    double s = sol.flux.fp(w);
    double margin = 1e-9 * std::max(1.0, xr - xl);
    auto foot = foot_in(w, xl - s * t, xr - s * t);
    if (!foot) continue;
    double y = *foot + s * t;
    y = std::min(std::max(y, xl + margin), xr - margin);
    stations.push_back(y);
  }
  return merge_breakpoints(std::move(stations), 0.0);
}

// Midpoint probe grid: midpoints of the cells of u(t, .) plus far-field
// stations one window-length out on both sides.
inline std::vector<double> oleinik_probe_midpoints(const FrontTrackingSolution& sol,
                                                   double t) {
  auto u = sol.at_time(t);
  const auto& xs = u.breakpoints();
  std::vector<double> probes;
  auto [wlo, whi] = sol.front_window(1.0);
  probes.push_back(wlo);
  for (size_t i = 0; i + 1 < xs.size(); ++i) probes.push_back(0.5 * (xs[i] + xs[i + 1]));
  probes.push_back(whi);
  return merge_breakpoints(std::move(probes), 0.0);
}

// Maximal forward difference quotient max_{x<y} (u(y)-u(x))/(y-x) over the
// probe grid. By the mediant inequality the max over all pairs equals the
// max over adjacent pairs.
inline double oleinik_check(const FrontTrackingSolution& sol, double t,
                            std::vector<double> probes = {}) {
  if (!(t > 0)) fail("time", "Oleinik check requires t > 0");
  if (probes.empty()) probes = oleinik_probe_stations(sol, t);
  auto u = sol.at_time(t);
  double worst = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < probes.size(); ++i) {
    double q = (u(probes[i + 1]) - u(probes[i])) / (probes[i + 1] - probes[i]);
    worst = std::max(worst, q);
  }
  return worst;
}

}  // namespace kinlab
