#pragma once

// cos^2 bumps with closed-form derivative and antiderivative; the test
// dictionary for the kinetic balance is built from tensor products of these.

#include <cmath>
#include <vector>

namespace kinlab {

// psi(s) = cos^2( pi (s - c) / (2 r) ) on [c - r, c + r], zero outside; C^1.
struct Bump {
  double c = 0.0, r = 1.0;

  double lo() const { return c - r; }
  double hi() const { return c + r; }

  double val(double s) const {
    if (s <= lo() || s >= hi()) return 0.0;
    double u = std::cos(M_PI * (s - c) / (2.0 * r));
    return u * u;
  }
  double deriv(double s) const {
    if (s <= lo() || s >= hi()) return 0.0;
    return -(M_PI / (2.0 * r)) * std::sin(M_PI * (s - c) / r);
  }
  // antiderivative from -infinity; total integral = r
  double integral(double s) const {
    if (s <= lo()) return 0.0;
    if (s >= hi()) return r;
    double u = s - c;
    return 0.5 * (u + r) + (r / (2.0 * M_PI)) * std::sin(M_PI * u / r);
  }
};

// phi(t, x) rho(v) = tb(t) xb(x) rho(v)
struct TestFn3 {
  Bump tb, xb, rho;
};

// Deterministic dictionary covering the window: a lattice of bump centers in
// (t, x) crossed with a few v-bumps. All supports stay strictly inside
// (0, T) x (xlo, xhi) x (vlo, vhi); the kinetic pairing needs compactness.
inline std::vector<TestFn3> default_dictionary(double T, double xlo, double xhi, double vlo,
                                               double vhi, int n_tx = 9, int n_v = 2) {
  std::vector<TestFn3> dict;
  double tr = 0.2 * T, xr = 0.2 * (xhi - xlo);
  int side = 3;
  int idx = 0;
  for (int it = 0; it < side && idx < n_tx; ++it)
    for (int ix = 0; ix < side && idx < n_tx; ++ix, ++idx) {
      Bump tb{T * (0.3 + 0.2 * it), tr};
      Bump xb{xlo + (xhi - xlo) * (0.28 + 0.22 * ix), xr};
      for (int iv = 0; iv < n_v; ++iv) {
        double c = vlo + (vhi - vlo) * (iv + 1.0) / (n_v + 1.0);
        double r = 0.9 * std::min(c - vlo, vhi - c);
        dict.push_back({tb, xb, Bump{c, r}});
      }
    }
  return dict;
}

}  // namespace kinlab
