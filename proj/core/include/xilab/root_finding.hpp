#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "xilab/errors.hpp"

namespace xilab {

struct BracketedRoot {
  double root = 0.0;
  double lo = 0.0;  // the final sign-change bracket
  double hi = 0.0;
  double f_root = 0.0;
  int iterations = 0;
};

/// Brent's method: bisection safeguarding secant / inverse quadratic steps.
/// Requires fa * fb <= 0. Stops when the sign-change bracket is narrower
/// than xtol (plus a few ulps of the root) or f hits exactly zero.
template <class F>
BracketedRoot brent_root(F&& f, double a, double b, double fa, double fb, double xtol, int max_iter = 200) {
  if (!(xtol > 0.0)) throw UsageError("brent_root: xtol must be positive");
  if (fa * fb > 0.0) throw UsageError("brent_root: endpoints do not bracket a sign change");
  if (fa == 0.0) return {a, a, a, 0.0, 0};
  if (fb == 0.0) return {b, b, b, 0.0, 0};
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * xtol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol1 || fb == 0.0) break;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p;
      double q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = d;
      }
    } else {
      d = m;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (m > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  if (fb == 0.0) return {b, b, b, 0.0, iter};
  return {b, std::min(b, c), std::max(b, c), fb, iter};
}

}  // namespace xilab
