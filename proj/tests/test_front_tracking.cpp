#include <catch2/catch_amalgamated.hpp>

#include "kinlab/front_tracking.hpp"
#include "support/godunov.hpp"

using namespace kinlab;

TEST_CASE("solve_riemann_scalar: Burgers cases") {
  auto f = FluxSpec::burgers();
  auto shock = solve_riemann_scalar(f, 1.0, 0.0);
  REQUIRE(shock.waves.size() == 1);
  REQUIRE(shock.waves[0].type == WaveFan::Wave::Type::Shock);
  REQUIRE(shock.waves[0].s_lo == Catch::Approx(0.5).margin(1e-12));

  auto fan = solve_riemann_scalar(f, 0.0, 1.0);
  REQUIRE(fan.waves.size() == 1);
  REQUIRE(fan.waves[0].type == WaveFan::Wave::Type::Rarefaction);
  REQUIRE(fan.waves[0].s_lo == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(fan.waves[0].s_hi == Catch::Approx(1.0).margin(1e-12));

  REQUIRE(solve_riemann_scalar(f, 0.3, 0.3).waves.empty());
}

TEST_CASE("solve_riemann_scalar: wave speeds nondecreasing (cubic flux)") {
  auto f = FluxSpec::cubic(1.0, -1.5, 0.6, 0.0);  // non-convex on [0,1]
  for (auto [a, b] : std::vector<std::pair<double, double>>{{0.9, 0.1}, {0.1, 0.9}}) {
    auto fan = solve_riemann_scalar(f, a, b);
    double last = -1e300;
    for (auto& w : fan.waves) {
      REQUIRE(w.s_lo >= last - 1e-9);
      last = w.s_hi;
    }
  }
}

TEST_CASE("front_track: single shock") {
  auto f = FluxSpec::burgers();
  PiecewiseConstantFn u0({0.0}, {1.0, 0.0});
  auto sol = front_track(u0, f, 1.0);
  REQUIRE(sol.fronts.size() == 1);
  REQUIRE(sol.fronts[0].speed == Catch::Approx(0.5).margin(1e-12));
  REQUIRE(sol.fronts[0].kind == Front::Kind::Shock);
  // Rankine-Hugoniot exact
  const auto& fr = sol.fronts[0];
  REQUIRE(std::abs(fr.speed * (fr.ur - fr.ul) - (f.f(fr.ur) - f.f(fr.ul))) < 1e-12);
  // position follows x = t/2
  auto u = sol.at_time(0.8);
  REQUIRE(u(0.39) == 1.0);
  REQUIRE(u(0.41) == 0.0);
}

TEST_CASE("front_track: constant data has no fronts") {
  auto sol = front_track(PiecewiseConstantFn::constant(0.4), FluxSpec::burgers(), 1.0);
  REQUIRE(sol.fronts.empty());
}

TEST_CASE("front_track: rarefaction fan quotients and conservation") {
  auto f = FluxSpec::burgers();
  PiecewiseConstantFn u0({0.0}, {0.0, 1.0});
  FrontTrackParams p;
  p.dv = 1.0 / 64;
  auto sol = front_track(u0, f, 1.0, p);
  REQUIRE(int(sol.fronts.size()) == 64);
  for (const auto& fr : sol.fronts) REQUIRE(fr.kind == Front::Kind::FanFront);
  REQUIRE(std::abs(sol.mass_drift(1.0)) < 1e-12);
  // the discrete fan realizes the Oleinik bound exactly
  for (double t : {0.25, 0.5, 1.0})
    REQUIRE(oleinik_check(sol, t) == Catch::Approx(1.0 / t).margin(1e-9));
}

TEST_CASE("front_track: overtaking dynamics against Godunov oracle") {
  // up-step then down-step: rarefaction overtaken by shock
  auto f = FluxSpec::burgers();
  PiecewiseConstantFn u0({0.0, 1.0}, {0.0, 1.0, 0.0});
  FrontTrackParams p;
  p.dv = 1.0 / 256;
  double T = 4.0;
  auto sol = front_track(u0, f, T, p);
  REQUIRE(std::abs(sol.mass_drift(T)) < 1e-11);
  // total variation nonincreasing in time
  double tv_prev = sol.initial.total_variation();
  for (double t : {0.5, 1.0, 2.0, 3.0, 4.0}) {
    double tv = sol.at_time(t).total_variation();
    REQUIRE(tv <= tv_prev + 1e-10);
    tv_prev = tv;
  }
  auto g = oracle::godunov_init(u0, -1.0, 6.0, 10000);
  oracle::godunov_run(g, f, T);
  double err = oracle::l1_distance(g, sol.at_time(T));
  REQUIRE(err < 2.0 * p.dv * T);
}

TEST_CASE("front_track: entropy admissibility of every shock front") {
  auto f = FluxSpec::burgers();
  Rng rng(7);
  std::vector<double> xs, vals;
  vals.push_back(rng.uniform());
  for (int i = 0; i < 30; ++i) {
    xs.push_back(i * 0.03);
    vals.push_back(rng.uniform());
  }
  auto sol = front_track(PiecewiseConstantFn(xs, vals), f, 0.5);
  for (const auto& fr : sol.fronts) {
    REQUIRE(std::abs(fr.speed * fr.jump() - (f.f(fr.ur) - f.f(fr.ul))) < 1e-12);
    if (fr.kind == Front::Kind::Shock) {
      // chord above the graph for a convex flux down-jump
      REQUIRE(fr.ul > fr.ur);
      for (int k = 1; k < 8; ++k) {
        double v = fr.ur + (fr.ul - fr.ur) * k / 8.0;
        double chordline = f.f(fr.ur) + fr.speed * (v - fr.ur);
        REQUIRE(chordline >= f.f(v) - 1e-12);
      }
    }
  }
  REQUIRE(std::abs(sol.mass_drift(0.5)) < 1e-11);
}

TEST_CASE("front_track: interactions merge shocks; fronts bounded") {
  auto f = FluxSpec::burgers();
  PiecewiseConstantFn u0({0.0, 0.5}, {1.0, 0.6, 0.0});
  auto sol = front_track(u0, f, 3.0);
  REQUIRE(sol.events.size() == 1);
  REQUIRE(sol.events[0].incoming.size() == 2);
  REQUIRE(sol.events[0].outgoing.size() == 1);
  int out = sol.events[0].outgoing[0];
  REQUIRE(sol.fronts[out].ul == 1.0);
  REQUIRE(sol.fronts[out].ur == 0.0);
  REQUIRE(sol.fronts[out].speed == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("front_track: complexity budget error") {
  FrontTrackParams p;
  p.dv = 1.0 / 64;
  p.max_fronts = 3;
  PiecewiseConstantFn u0({0.0}, {0.0, 1.0});
  bool threw = false;
  try {
    // seeding alone exceeds the budget only via interactions; use colliding data
    front_track(PiecewiseConstantFn({0.0, 1.0}, {0.0, 1.0, 0.0}), FluxSpec::burgers(), 4.0,
                p);
  } catch (const KinlabError& e) {
    threw = (e.code == "complexity budget");
  }
  REQUIRE(threw);
}

TEST_CASE("oleinik_check: shock-only solutions stay nonpositive") {
  auto sol = front_track(PiecewiseConstantFn({0.0}, {1.0, 0.0}), FluxSpec::burgers(), 1.0);
  REQUIRE(oleinik_check(sol, 0.5) <= 0.0);
  REQUIRE_THROWS_AS(oleinik_check(sol, 0.0), KinlabError);
}

TEST_CASE("oleinik_check: random 50-piece data satisfies 1/t") {
  Rng rng(12345);
  std::vector<double> xs, vals;
  vals.push_back(rng.uniform());
  for (int i = 0; i < 49; ++i) {
    xs.push_back(i * 0.02);
    vals.push_back(rng.uniform());
  }
  auto sol = front_track(PiecewiseConstantFn(xs, vals), FluxSpec::burgers(), 0.6);
  REQUIRE(oleinik_check(sol, 0.5) <= 2.0 + 1e-9);
}
