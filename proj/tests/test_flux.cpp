#include <catch2/catch_amalgamated.hpp>

#include "kinlab/flux.hpp"

using namespace kinlab;

TEST_CASE("flux derivative evaluators agree with finite differences") {
  auto check = [](const FluxSpec& f) {
    Rng rng(42);
    double h = 1e-5;
    for (int i = 0; i < 100; ++i) {
      double v = rng.uniform(f.lo() + 2 * h, f.hi() - 2 * h);
      double fd1 = (f.f(v + h) - f.f(v - h)) / (2 * h);
      double fd2 = (f.fp(v + h) - f.fp(v - h)) / (2 * h);
      REQUIRE(std::abs(fd1 - f.fp(v)) < 1e-8);
      REQUIRE(std::abs(fd2 - f.fpp(v)) < 1e-6);
    }
  };
  check(FluxSpec::burgers());
  check(FluxSpec::cubic(1.0, 0.0, 0.0, 0.0));
  check(FluxSpec::cubic(1.0, -1.5, 0.0, 0.0));
}

TEST_CASE("entropy_flux: Burgers pairs") {
  auto f = FluxSpec::burgers();
  // eta(v) = v  =>  q = f
  auto p1 = entropy_flux(
      f, [](double v) { return v; }, [](double) { return 1.0; }, [](double) { return 0.0; });
  for (double v : {0.1, 0.5, 0.9}) REQUIRE(p1.q(v) == Catch::Approx(0.5 * v * v).margin(1e-12));

  // eta(v) = v^2/2  =>  q = v^3/3
  auto p2 = entropy_flux(
      f, [](double v) { return 0.5 * v * v; }, [](double v) { return v; },
      [](double) { return 1.0; });
  for (double v : {0.2, 0.7, 1.0})
    REQUIRE(p2.q(v) == Catch::Approx(v * v * v / 3.0).margin(1e-12));
}

TEST_CASE("entropy_flux: cubic flux quadrature oracle") {
  // f = v^3, eta = v^2: q(1) = int_0^1 3 s^2 * 2 s ds = 3/2
  auto f = FluxSpec::cubic(1.0, 0.0, 0.0, 0.0);
  auto p = entropy_flux(
      f, [](double v) { return v * v; }, [](double v) { return 2.0 * v; },
      [](double) { return 2.0; });
  REQUIRE(p.q(1.0) == Catch::Approx(1.5).margin(1e-12));
}

TEST_CASE("entropy_flux compatibility |q' - f' eta'| on a grid") {
  auto f = FluxSpec::cubic(1.0, -1.5, 0.25, 0.0);
  auto p = entropy_flux(
      f, [](double v) { return std::exp(v); }, [](double v) { return std::exp(v); },
      [](double v) { return std::exp(v); });
  double h = 1e-5;
  for (double v : linspace(0.01, 0.99, 1000)) {
    double qp = (p.q(v + h) - p.q(v - h)) / (2 * h);
    REQUIRE(std::abs(qp - f.fp(v) * p.eta_p(v)) < 1e-8);
  }
}

TEST_CASE("nondegeneracy_h: Burgers gives delta/3") {
  auto f = FluxSpec::burgers();
  for (double vbar : {0.5, 0.4}) {
    for (double d : {0.3, 0.1}) {
      REQUIRE(nondegeneracy_h(f, vbar, d, Side::minus) ==
              Catch::Approx(d / 3.0).margin(1e-10));
      REQUIRE(nondegeneracy_h(f, vbar, d, Side::plus) ==
              Catch::Approx(d / 3.0).margin(1e-10));
    }
  }
}

TEST_CASE("nondegeneracy_h: affine flux is degenerate") {
  auto f = FluxSpec::affine(0.7);
  REQUIRE(nondegeneracy_h(f, 0.5, 0.2, Side::minus) == 0.0);
  REQUIRE(nondegeneracy_h(f, 0.5, 0.2, Side::plus) == 0.0);
}

TEST_CASE("nondegeneracy_h: cubic flux against brute force") {
  // f = v^3, f' = 3v^2, vbar = 0.5, delta = 0.2, minus side: window (0.3, 0.5).
  // |f'(0.5) - f'(v)| = 0.75 - 3v^2 on the window (v < 0.5), so the set
  // {|..| >= 2h} = (0.3, sqrt((0.75-2h)/3)] and M(h) = sqrt(0.25 - 2h/3) - 0.3.
  auto f = FluxSpec::cubic(1.0, 0.0, 0.0, 0.0);
  auto M = [](double h) {
    double r = 0.25 - 2.0 * h / 3.0;
    if (r <= 0.09) return 0.0;
    return std::sqrt(r) - 0.3;
  };
  // exhaustive h-grid oracle
  double expect = 0.0;
  for (int i = 1; i <= 2000000; ++i) {
    double h = 0.3 * i / 2000000.0;
    if (M(h) >= h) expect = h;
  }
  double got = nondegeneracy_h(f, 0.5, 0.2, Side::minus);
  REQUIRE(got == Catch::Approx(expect).margin(1e-6));
  // monotone nonincreasing under shrinking delta
  double h1 = nondegeneracy_h(f, 0.5, 0.2, Side::minus);
  double h2 = nondegeneracy_h(f, 0.5, 0.1, Side::minus);
  double h3 = nondegeneracy_h(f, 0.5, 0.05, Side::minus);
  REQUIRE(h2 <= h1 + 1e-12);
  REQUIRE(h3 <= h2 + 1e-12);
  // 0 < h < delta whenever the flux is weakly genuinely nonlinear
  REQUIRE(h1 > 0.0);
  REQUIRE(h1 < 0.2);
}

TEST_CASE("wgn_test: Burgers passes, affine fails, plateau detected") {
  REQUIRE(wgn_test(FluxSpec::burgers(), 16).pass);
  auto bad = wgn_test(FluxSpec::affine(0.5), 64);
  REQUIRE_FALSE(bad.pass);
  REQUIRE(bad.worst_measure > 0.9);  // full-measure level set

  // fine piecewise-linear interpolation of Burgers with one f' plateau of
  // length 0.2 spliced in on [0.4, 0.6]
  std::vector<double> v, fv;
  double acc = 0.0, prev = 0.0;
  v.push_back(0.0);
  fv.push_back(0.0);
  for (double x = 0.02; x < 1.0 + 1e-9; x += 0.02) {
    double slope = (x <= 0.4 || x > 0.6) ? 0.5 * (prev + x) : 0.5;
    acc += slope * 0.02;
    v.push_back(x);
    fv.push_back(acc);
    prev = x;
  }
  auto pl = FluxSpec::piecewise_linear(v, fv);
  auto rep = wgn_test(pl, 256);
  REQUIRE_FALSE(rep.pass);
  REQUIRE(rep.worst_measure == Catch::Approx(0.2).margin(0.015));
}

TEST_CASE("convexity_intervals") {
  auto one = convexity_intervals(FluxSpec::burgers());
  REQUIRE(one.intervals.size() == 1);
  REQUIRE(one.intervals[0].sign == 1);
  REQUIRE(one.intervals[0].lo == Catch::Approx(0.0).margin(1e-6));
  REQUIRE(one.intervals[0].hi == Catch::Approx(1.0).margin(1e-6));

  // f = v^3 - 1.5 v^2: f'' = 6v - 3, inflection at 0.5
  auto two = convexity_intervals(FluxSpec::cubic(1.0, -1.5, 0.0, 0.0));
  REQUIRE(two.intervals.size() == 2);
  REQUIRE(two.intervals[0].sign == -1);
  REQUIRE(two.intervals[1].sign == 1);
  REQUIRE(two.intervals[0].hi == Catch::Approx(0.5).margin(1e-6));
  REQUIRE(two.intervals[1].lo == Catch::Approx(0.5).margin(1e-6));

  auto none = convexity_intervals(FluxSpec::affine(2.0));
  REQUIRE(none.intervals.empty());
  REQUIRE(none.residual.size() == 1);

  // coverage: intervals plus residual tile the domain
  double covered = 0.0;
  for (auto& iv : two.intervals) covered += iv.hi - iv.lo;
  for (auto& r : two.residual) covered += r.second - r.first;
  REQUIRE(covered == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("reflected flux g(w) = -f(lo+hi-w)") {
  auto f = FluxSpec::burgers();
  auto g = f.reflected();
  for (double w : linspace(0.0, 1.0, 17)) {
    REQUIRE(g.f(w) == Catch::Approx(-f.f(1.0 - w)).margin(1e-14));
    REQUIRE(g.fp(w) == Catch::Approx(f.fp(1.0 - w)).margin(1e-14));
  }
}
