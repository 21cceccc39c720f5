#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "gelfree/errors.hpp"

// Guarded scalar root finding: bisection brackets with Newton refinement.
// All inverse maps in this library (hitting time, Sigma(t,.), h) are proved
// strictly monotone, so a bracket, once established, is globally safe.

namespace gelfree {

struct RootOptions {
  double rel_tol = 1e-12;  // acceptance tolerance on |f| scale, see callers
  int max_iter = 200;
};

// Finds the root of f in [lo, hi], assuming f(lo) and f(hi) have opposite
// signs (or one endpoint is an exact root).  `df` may be empty; when present
// it drives Newton steps that are clipped back to bisection whenever they
// leave the bracket.  Iterates until the bracket collapses to machine width
// or the iteration cap is reached; returns the best midpoint either way
// (callers enforce their own residual postconditions).
inline double solve_bracketed(const std::function<double(double)>& f,
                              const std::function<double(double)>& df,
                              double lo, double hi,
                              const RootOptions& opt = {}) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  double fhi = f(hi);
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0))
    throw ConvergenceError("solve_bracketed: endpoints do not bracket a root");

  double x = 0.5 * (lo + hi);
  for (int it = 0; it < opt.max_iter; ++it) {
    double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (flo < 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    if (hi - lo <= opt.rel_tol * 1e-4 * (std::abs(lo) + std::abs(hi)) ||
        hi == std::nextafter(lo, hi))
      return 0.5 * (lo + hi);

    double next = 0.0;
    bool newton_ok = false;
    if (df) {
      const double d = df(x);
      if (std::isfinite(d) && d != 0.0) {
        next = x - fx / d;
        newton_ok = std::isfinite(next) && next > lo && next < hi;
      }
    }
    x = newton_ok ? next : 0.5 * (lo + hi);
  }
  return 0.5 * (lo + hi);
}

// Grows [lo, hi] geometrically until pred(lo) <= 0 <= pred(hi); used to make
// the analytic starting brackets unconditional.  Caps at 200 doublings.
inline void expand_bracket(const std::function<double(double)>& f, double& lo,
                           double& hi, const std::string& what) {
  int n = 0;
  while (f(lo) > 0.0) {
    lo *= 0.5;
    if (++n > 200 || lo <= 0.0)
      throw ConvergenceError(what + ": bracket expansion failed (lower)");
  }
  n = 0;
  while (f(hi) < 0.0) {
    hi *= 2.0;
    if (++n > 200 || !std::isfinite(hi))
      throw ConvergenceError(what + ": bracket expansion failed (upper)");
  }
}

}  // namespace gelfree
