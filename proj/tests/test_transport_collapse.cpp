#include <catch2/catch_amalgamated.hpp>

#include "kinlab/front_tracking.hpp"
#include "kinlab/kinetic_density.hpp"

using namespace kinlab;

TEST_CASE("transport_collapse: constant state is a fixed point") {
  auto u = PiecewiseConstantFn::constant(0.37);
  auto d = KineticDensity::from_function(u, -1.0, 1.0, 64, 32);
  auto d2 = transport_collapse_step(d, FluxSpec::burgers(), 0.01);
  REQUIRE(l1_distance(d, d2) < 1e-14);
  REQUIRE(d2.is_monotone_indicator());
}

TEST_CASE("transport_collapse: column mass preserved exactly") {
  PiecewiseConstantFn u({-0.2, 0.1, 0.4}, {0.9, 0.2, 0.7, 0.1});
  auto d = KineticDensity::from_function(u, -1.0, 1.0, 128, 64);
  double m0 = 0.0;
  for (int i = 0; i < d.nx; ++i) m0 += d.column_mass(i);
  auto d2 = transport_collapse_step(d, FluxSpec::burgers(), 0.01);
  double m1 = 0.0;
  for (int i = 0; i < d2.nx; ++i) m1 += d2.column_mass(i);
  // interior mass moves by boundary fluxes only; far fields equal here? they
  // differ, so compare against the exact flux imbalance instead
  (void)m0;
  (void)m1;
  // per-column collapse conserves the streamed column mass exactly: redo one
  // step by hand without collapse and compare masses column-wise
  KineticDensity streamed = d;
  for (int k = 0; k < d.nv; ++k) {
    double shift = FluxSpec::burgers().fp(d.v_center(k)) * 0.01 / d.dx();
    int whole = int(std::floor(shift));
    double frac = shift - whole;
    for (int i = 0; i < d.nx; ++i) {
      auto sample = [&](int j) {
        j = std::min(std::max(j, 0), d.nx - 1);
        return d.at(j, k);
      };
      streamed.at(i, k) = (1.0 - frac) * sample(i - whole) + frac * sample(i - whole - 1);
    }
  }
  for (int i = 0; i < d.nx; ++i)
    REQUIRE(d2.column_mass(i) == Catch::Approx(streamed.column_mass(i)).margin(1e-14));
  REQUIRE(d2.is_monotone_indicator());
}

TEST_CASE("transport_collapse: CFL violation detected") {
  auto d = KineticDensity::from_function(PiecewiseConstantFn::constant(0.5), 0.0, 1.0, 16, 8);
  REQUIRE_THROWS_AS(transport_collapse_step(d, FluxSpec::burgers(), 1.0), KinlabError);
}

TEST_CASE("transport_collapse: Burgers shock agrees with front tracking") {
  auto f = FluxSpec::burgers();
  PiecewiseConstantFn u0({0.0}, {1.0, 0.0});
  auto sol = front_track(u0, f, 1.0);
  int nx = 200, nv = 64;
  auto d = KineticDensity::from_function(u0, -1.0, 2.0, nx, nv);
  for (int s = 0; s < 100; ++s) d = transport_collapse_step(d, f, 0.01);
  auto ref = KineticDensity::from_function(sol.at_time(1.0), -1.0, 2.0, nx, nv);
  double err = l1_distance(d, ref);
  REQUIRE(err < 3.0 * d.dx() * 1.0);  // three grid cells' volume (v-extent 1)
}

TEST_CASE("transport_collapse: rarefaction converges at ~ sqrt(dx)") {
  auto f = FluxSpec::burgers();
  PiecewiseConstantFn u0({0.0}, {0.0, 1.0});
  double T = 0.5;
  auto exact = [&](double x) { return std::min(1.0, std::max(0.0, x / T)); };
  std::vector<double> errs;
  for (int nx : {100, 200, 400}) {
    auto d = KineticDensity::from_function(u0, -1.0, 2.0, nx, nx / 2);
    double dt = 0.9 * d.dx();
    int steps = int(std::ceil(T / dt));
    dt = T / steps;
    for (int s = 0; s < steps; ++s) d = transport_collapse_step(d, f, dt);
    auto prof = d.profile();
    double err = 0.0;
    for (int i = 0; i < nx; ++i) {
      double x = d.x_center(i);
      err += std::abs(prof(x) - exact(x)) * d.dx();
    }
    errs.push_back(err);
  }
  double rate1 = std::log2(errs[0] / errs[1]);
  double rate2 = std::log2(errs[1] / errs[2]);
  REQUIRE(0.5 * (rate1 + rate2) > 0.45);
}
