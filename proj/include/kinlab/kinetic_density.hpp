#pragma once

// Kinetic density chi on an (x, v) grid and the transport-collapse stepper:
// free-stream every v-slab by f'(v) dt with conservative remapping, then
// collapse each column back to the indicator of [0, column mass].

#include <vector>

#include "kinlab/flux.hpp"
#include "kinlab/piecewise.hpp"

namespace kinlab {

struct KineticDensity {
  double xlo = 0.0, xhi = 1.0;
  int nx = 0, nv = 0;  // cells; v spans [0, 1]
  std::vector<double> cell;  // nx * nv values in [0, 1], row-major in x

  double dx() const { return (xhi - xlo) / nx; }
  double dv() const { return 1.0 / nv; }
  double& at(int i, int k) { return cell[size_t(i) * nv + k]; }
  double at(int i, int k) const { return cell[size_t(i) * nv + k]; }
  double v_center(int k) const { return (k + 0.5) * dv(); }
  double x_center(int i) const { return xlo + (i + 0.5) * dx(); }

  double column_mass(int i) const {
    double m = 0.0;
    for (int k = 0; k < nv; ++k) m += at(i, k) * dv();
    return m;
  }

  // column profile as a function of x (the reconstructed u)
  PiecewiseConstantFn profile() const {
    std::vector<double> xs, vals;
    vals.push_back(column_mass(0));
    for (int i = 1; i < nx; ++i) {
      xs.push_back(xlo + i * dx());
      vals.push_back(column_mass(i));
    }
    return PiecewiseConstantFn(xs, vals);
  }

  bool is_monotone_indicator(double tol = 1e-12) const {
    for (int i = 0; i < nx; ++i)
      for (int k = 0; k + 1 < nv; ++k)
        if (at(i, k + 1) > at(i, k) + tol) return false;
    return true;
  }

  static KineticDensity from_function(const PiecewiseConstantFn& u, double xlo, double xhi,
                                      int nx, int nv) {
    KineticDensity d;
    d.xlo = xlo;
    d.xhi = xhi;
    d.nx = nx;
    d.nv = nv;
    d.cell.assign(size_t(nx) * nv, 0.0);
    for (int i = 0; i < nx; ++i) {
      double a = xlo + i * d.dx(), b = a + d.dx();
      for (int k = 0; k < nv; ++k) {
        // exact cell average of 1_{v <= u(x)} over the (x, v) cell
        double vlo = k * d.dv(), vhi = (k + 1) * d.dv();
        double m = u.integrate_cells(a, b, [&](double uu) {
          return std::min(std::max(uu - vlo, 0.0), vhi - vlo) / (vhi - vlo);
        });
        d.at(i, k) = m / (b - a);
      }
    }
    return d;
  }
};

// One transport-collapse step. Columns at the domain ends are refilled with
// the boundary profile (far fields assumed constant over the step).
inline KineticDensity transport_collapse_step(const KineticDensity& in, const FluxSpec& flux,
                                              double dt) {
  if (!(dt > 0)) fail("time", "dt must be positive");
  double maxshift = 0.0;
  for (int k = 0; k < in.nv; ++k)
    maxshift = std::max(maxshift, std::abs(flux.fp(in.v_center(k))) * dt);
  if (maxshift > in.dx() * (1.0 + 1e-12)) fail("cfl", "dt * max|f'| exceeds one x-cell");

  KineticDensity out = in;
  // free streaming: conservative shift of each v-slab
  for (int k = 0; k < in.nv; ++k) {
    double shift = flux.fp(in.v_center(k)) * dt / in.dx();  // in cells, |shift| <= 1
    int whole = int(std::floor(shift));
    double frac = shift - whole;
    for (int i = 0; i < in.nx; ++i) {
      auto sample = [&](int j) {
        j = std::min(std::max(j, 0), in.nx - 1);  // constant far fields
        return in.at(j, k);
      };
      out.at(i, k) = (1.0 - frac) * sample(i - whole) + frac * sample(i - whole - 1);
    }
  }
  // collapse: each column becomes the indicator of [0, column mass]
  for (int i = 0; i < out.nx; ++i) {
    double mass = out.column_mass(i);
    for (int k = 0; k < out.nv; ++k) {
      double vlo = k * out.dv(), vhi = (k + 1) * out.dv();
      out.at(i, k) = std::min(std::max(mass - vlo, 0.0), vhi - vlo) / (vhi - vlo);
    }
  }
  return out;
}

// L1(x, v) distance between two densities on the same grid
inline double l1_distance(const KineticDensity& a, const KineticDensity& b) {
  if (a.nx != b.nx || a.nv != b.nv) fail("domain", "grid mismatch");
  double acc = 0.0;
  for (size_t i = 0; i < a.cell.size(); ++i) acc += std::abs(a.cell[i] - b.cell[i]);
  return acc * a.dx() * a.dv();
}

}  // namespace kinlab
