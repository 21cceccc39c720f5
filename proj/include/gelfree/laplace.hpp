#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>

#include "gelfree/characteristics.hpp"
#include "gelfree/errors.hpp"
#include "gelfree/measure.hpp"

// The transformed solution itself: L(t,s) = ell(t, zeta(t,s)).  Evaluating a
// (t,s) grid costs one T_inverse root-find per distinct t (the zeta bracket
// hangs off it) plus one zeta solve per point, so the evaluator memoizes
// theta(t) = T_inverse(t) behind a shared mutex: any number of concurrent
// readers after the entry exists, single writer to create it.

namespace gelfree {

class LaplaceEvaluator {
 public:
  LaplaceEvaluator(MeasureSpec measure, double k, double root_tol = 1e-12,
                   double residual_step = 1e-4)
      : measure_(std::move(measure)),
        k_(k),
        root_tol_(root_tol),
        residual_step_(residual_step) {
    detail::require_positive_k(k_);
    if (!(root_tol_ > 0.0) || !(residual_step_ > 0.0))
      throw DomainError("evaluator tolerances must be positive");
  }

  LaplaceEvaluator(const LaplaceEvaluator&) = delete;
  LaplaceEvaluator& operator=(const LaplaceEvaluator&) = delete;

  double k() const { return k_; }
  const MeasureSpec& measure() const { return measure_; }
  double residual_step() const { return residual_step_; }

  // Memoized T_inverse.
  double theta(double t) const {
    {
      std::shared_lock lock(cache_mutex_);
      auto it = theta_cache_.find(t);
      if (it != theta_cache_.end()) return it->second;
    }
    const double value = T_inverse(t, k_, measure_);
    std::unique_lock lock(cache_mutex_);
    return theta_cache_.emplace(t, value).first->second;
  }

  double L(double t, double s) const {
    if (!(t >= 0.0)) throw DomainError("L(t,s) needs t >= 0");
    if (!(s >= 0.0)) throw DomainError("L(t,s) needs s >= 0");
    if (t == 0.0) return s == 0.0 ? measure_.total_mass() : measure_.transform(s).L0;
    // s = 0 is not special-cased to the constant 1: the returned value is
    // ell evaluated at theta(t), whose distance from 1 measures the root
    // finder's and the closed forms' joint health (mass conservation).
    const double th = theta(t);
    const double foot = (s == 0.0) ? th : zeta_from(t, s, th);
    return detail::ell_tv(measure_.transform(foot), k_, t);
  }

  // |dL/dt - (1 + k - L) dL/ds - k (1 - L)/s| with central differences of
  // step h; h <= 0 selects the default step residual_step * max(1, s, t).
  double pde_residual(double t, double s, double h = 0.0) const {
    if (h <= 0.0) h = residual_step_ * std::max({1.0, s, t});
    if (!(t > h) || !(s > h))
      throw DomainError("pde_residual needs t > h and s > h");
    const double Lc = L(t, s);
    const double dLdt = (L(t + h, s) - L(t - h, s)) / (2.0 * h);
    const double dLds = (L(t, s + h) - L(t, s - h)) / (2.0 * h);
    return std::abs(dLdt - (1.0 + k_ - Lc) * dLds - k_ * (1.0 - Lc) / s);
  }

  // dL/ds at s = 0: L1(theta)/(1 + t L1(theta)).  Finite for all t > 0 even
  // when the initial measure has no first moment.
  double dL_ds_at_zero(double t) const {
    if (!(t > 0.0)) throw DomainError("dL_ds_at_zero needs t > 0");
    const double th = theta(t);
    const TransformValue tv = measure_.transform(th);
    return tv.L1 / (1.0 + t * tv.L1);
  }

 private:
  double zeta_from(double t, double target, double th) const {
    double lo = th;
    double hi = target + (1.0 + k_) * t;
    const auto f = [&](double sigma) {
      return sigma_closed(t, sigma, k_, measure_) - target;
    };
    if (f(hi) < 0.0) expand_bracket(f, lo, hi, "zeta");
    const auto df = [&](double sigma) {
      return sigma > th ? dsigma_ds(t, sigma, k_, measure_) : 0.0;
    };
    const double root = solve_bracketed(f, df, lo, hi, {root_tol_, 200});
    if (std::abs(sigma_closed(t, root, k_, measure_) - target) >
        1e-12 * std::max(1.0, target))
      throw ConvergenceError("zeta: residual tolerance not met");
    return root;
  }

  MeasureSpec measure_;
  double k_;
  double root_tol_;
  double residual_step_;
  mutable std::shared_mutex cache_mutex_;
  mutable std::map<double, double> theta_cache_;
};

inline double L(const LaplaceEvaluator& ev, double t, double s) {
  return ev.L(t, s);
}

inline double pde_residual(const LaplaceEvaluator& ev, double t, double s,
                           double h = 0.0) {
  return ev.pde_residual(t, s, h);
}

inline double dL_ds_at_zero(const LaplaceEvaluator& ev, double t) {
  return ev.dL_ds_at_zero(t);
}

inline double moment_asymptote(double k) {
  detail::require_positive_k(k);
  return std::expm1(1.0 / k);
}

}  // namespace gelfree
