#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "gelfree/detail/math.hpp"
#include "gelfree/errors.hpp"
#include "gelfree/measure.hpp"
#include "gelfree/rootfind.hpp"

// Characteristic system behind the transformed solution:
//
//   dSigma/dt = ell - 1 - k,   dell/dt = k (1 - ell) / Sigma,
//   Sigma(0) = s,              ell(0) = L0(s).
//
// Both components have closed forms driven by the transform bundle at the
// foot point s:
//
//   ell(t,s)   = L0 - k ln(1 + t L1)
//   Sigma(t,s) = (1 + t L1) (s - (k/L1) ln(1 + t L1))
//   T(s)       = expm1(s L1 / k) / L1          (time Sigma reaches the axis)
//
// using the exact identity 1 - L0 = -s L1 throughout.  An independent RK4
// integrator of the ODE system doubles as the oracle the closed forms are
// validated against.

namespace gelfree {

struct PathSample {
  double t;
  double Sigma;
  double ell;
};

struct CharacteristicPath {
  double s0 = 0.0;
  double k = 0.0;
  std::vector<PathSample> samples;
  double T_hit = 0.0;
};

namespace detail {

inline void require_positive_k(double k) {
  if (!(k > 0.0)) throw DomainError("fragmentation constant k must be positive");
}

// Relative half-width of the window around T(s) in which the closed forms
// snap to their exact limit values (ell -> 1, Sigma -> 0) instead of
// evaluating a 0*log(0) expression.
constexpr double kAxisSnap = 1e-10;

inline double time_to_axis_tv(const TransformValue& tv, double k) {
  return std::expm1(tv.s * tv.L1 / k) / tv.L1;
}

// dT/ds = [L0' e^{s L1 / k} - k T L1'] / (k L1); derived by differentiating
// expm1(s L1 / k)/L1 and using (s L1)' = L0'.
inline double time_to_axis_derivative_tv(const TransformValue& tv, double k) {
  const double T = time_to_axis_tv(tv, k);
  return (tv.L0_prime * std::exp(tv.s * tv.L1 / k) - k * T * tv.L1_prime) /
         (k * tv.L1);
}

// Shared domain guard: returns T(s) and either clamps t onto it (within the
// snap window) or rejects.  at_axis is set when the caller should return the
// limit values.
inline double clamp_to_axis(const TransformValue& tv, double k, double& t,
                            bool& at_axis) {
  if (!(t >= 0.0)) throw DomainError("time must be nonnegative");
  const double T = time_to_axis_tv(tv, k);
  const double window = kAxisSnap * std::max(1.0, T);
  if (t > T + window)
    throw PastSingularityError("characteristic from s = " + std::to_string(tv.s) +
                               " reaches the axis at t = " + std::to_string(T) +
                               " < requested t = " + std::to_string(t));
  at_axis = (t >= T - window);
  if (at_axis) t = T;
  return T;
}

inline double ell_tv(const TransformValue& tv, double k, double t) {
  bool at_axis = false;
  clamp_to_axis(tv, k, t, at_axis);
  if (at_axis) return 1.0;
  return tv.L0 - k * std::log1p(t * tv.L1);
}

inline double sigma_tv(const TransformValue& tv, double k, double t) {
  bool at_axis = false;
  clamp_to_axis(tv, k, t, at_axis);
  if (at_axis) return 0.0;
  const double u = t * tv.L1;
  return (1.0 + u) * (tv.s - (k / tv.L1) * std::log1p(u));
}

// dSigma/ds = 1 + t L0' + k (L1'/L1^2) [ln(1+t L1) - t L1]; the bracket is
// evaluated as a dedicated series for small t L1 where ln(1+u) and u cancel.
inline double dsigma_ds_tv(const TransformValue& tv, double k, double t) {
  const double u = t * tv.L1;
  return 1.0 + t * tv.L0_prime +
         k * (tv.L1_prime / (tv.L1 * tv.L1)) * log1p_minus_x(u);
}

}  // namespace detail

inline double time_to_axis(double s, double k, const MeasureSpec& m) {
  detail::require_positive_k(k);
  return detail::time_to_axis_tv(m.transform(s), k);
}

inline double time_to_axis_derivative(double s, double k, const MeasureSpec& m) {
  detail::require_positive_k(k);
  return detail::time_to_axis_derivative_tv(m.transform(s), k);
}

inline double ell_closed(double t, double s, double k, const MeasureSpec& m) {
  detail::require_positive_k(k);
  return detail::ell_tv(m.transform(s), k, t);
}

inline double sigma_closed(double t, double s, double k, const MeasureSpec& m) {
  detail::require_positive_k(k);
  return detail::sigma_tv(m.transform(s), k, t);
}

inline double dsigma_ds(double t, double s, double k, const MeasureSpec& m) {
  detail::require_positive_k(k);
  if (!(t >= 0.0)) throw DomainError("time must be nonnegative");
  const TransformValue tv = m.transform(s);
  const double T = detail::time_to_axis_tv(tv, k);
  if (!(t < T))
    throw DomainError("dsigma_ds requires s beyond the inverse axis-hitting time");
  return detail::dsigma_ds_tv(tv, k, t);
}

// ---------------------------------------------------------------------------
// RK4 oracle.  Integrates the raw ODE system with no knowledge of the closed
// forms.  State is carried in long double: the terminal phase divides by
// Sigma -> 0, and those last steps otherwise eat the 1e-8 agreement budget.
// Steps shrink proportionally to Sigma near the axis (|dSigma/dt| <= 1+k, so
// Sigma/(16(1+k)) keeps ~16 steps per remaining lifetime); samples stop at
// Sigma <= k*dt per the stopping rule, an unrecorded tail continues at
// tighter relative steps for six more decades, and the final sliver is
// closed by the second-order axis asymptotics (see below).

inline CharacteristicPath integrate_characteristics_oracle(double s, double k,
                                                           const MeasureSpec& m,
                                                           double dt) {
  detail::require_positive_k(k);
  if (!(s > 0.0)) throw DomainError("starting point s must be positive");
  if (!(dt > 0.0)) throw DomainError("step dt must be positive");

  const TransformValue tv0 = m.transform(s);

  CharacteristicPath path;
  path.s0 = s;
  path.k = k;

  long double SG = s;
  long double EL = tv0.L0;
  long double t = 0.0L;
  const long double K = k;
  const long double shrink = 16.0L * (1.0L + K);
  const long double tail_shrink = 64.0L * (1.0L + K);
  const long double sample_floor = static_cast<long double>(k) * dt;
  const long double hard_floor = std::max(1e-6L * sample_floor, 1e-300L);

  // Keep paths bounded: stride the bulk but always record the terminal
  // approach where the agreement checks are hardest.
  const double est_steps = s / (k * dt);
  const std::size_t stride =
      std::max<std::size_t>(1, static_cast<std::size_t>(est_steps / 4096.0));
  const long double dense_zone = 32.0L * (1.0L + K) * sample_floor;

  const auto f_sigma = [K](long double ell) { return ell - 1.0L - K; };
  const auto f_ell = [K](long double sg, long double ell) {
    return K * (1.0L - ell) / sg;
  };

  auto record = [&](long double tt, long double sg, long double el) {
    if (!path.samples.empty()) {
      const PathSample& prev = path.samples.back();
      if (!(static_cast<double>(sg) < prev.Sigma))
        throw OracleInconsistency("oracle path: Sigma not strictly decreasing");
    }
    if (!(el >= 0.0L) || !(el < 1.0L))
      throw OracleInconsistency("oracle path: ell left [0,1)");
    path.samples.push_back({static_cast<double>(tt), static_cast<double>(sg),
                            static_cast<double>(el)});
  };

  record(t, SG, EL);
  std::size_t step_index = 0;
  while (SG > hard_floor) {
    const long double h = std::min(
        static_cast<long double>(dt),
        SG / (SG > sample_floor ? shrink : tail_shrink));
    const long double k1s = f_sigma(EL), k1l = f_ell(SG, EL);
    const long double s2 = SG + 0.5L * h * k1s, l2 = EL + 0.5L * h * k1l;
    const long double k2s = f_sigma(l2), k2l = f_ell(s2, l2);
    const long double s3 = SG + 0.5L * h * k2s, l3 = EL + 0.5L * h * k2l;
    const long double k3s = f_sigma(l3), k3l = f_ell(s3, l3);
    const long double s4 = SG + h * k3s, l4 = EL + h * k3l;
    const long double k4s = f_sigma(l4), k4l = f_ell(s4, l4);
    SG += h / 6.0L * (k1s + 2.0L * k2s + 2.0L * k3s + k4s);
    EL += h / 6.0L * (k1l + 2.0L * k2l + 2.0L * k3l + k4l);
    t += h;
    ++step_index;
    if (SG <= sample_floor) break;
    if (step_index % stride == 0 || SG <= dense_zone) record(t, SG, EL);
  }
  // Remaining sliver: near the axis 1 - ell grows linearly in Sigma (the
  // path invariant pins the slope), so dSigma/dt = -(k + c sigma) and the
  // remaining time integrates to (Sigma/k) log1p(u)/u with u = (1 - ell)/k.
  const long double u = (1.0L - EL) / K;
  const long double lead = SG / K;
  const long double rem =
      u > 1e-12L ? lead * std::log1p(u) / u : lead * (1.0L - 0.5L * u);
  path.T_hit = static_cast<double>(t + rem);
  path.samples.push_back({path.T_hit, 0.0, 1.0});
  if (!(path.T_hit > path.samples[path.samples.size() - 2].t))
    throw OracleInconsistency("oracle path: axis-hitting time not past last sample");
  return path;
}

// ---------------------------------------------------------------------------
// Inverse maps.  Both targets are strictly increasing in s, so a bracketed
// solve is globally safe; Newton acceleration uses the analytic derivatives.

// Inverse of T: the unique s with T(s) = t.
inline double T_inverse(double t, double k, const MeasureSpec& m) {
  detail::require_positive_k(k);
  if (!(t > 0.0)) throw DomainError("T_inverse needs t > 0");
  // Initial guesses bracket both asymptotic regimes T ~ s/k (small s) and
  // T ~ s (1 - e^{-1/k}) (large s); expansion covers what they miss.
  const double em = -std::expm1(-1.0 / k);
  double lo = 0.5 * t * em;
  double hi = 2.0 * t / k;
  const auto f = [&](double sigma) { return time_to_axis(sigma, k, m) - t; };
  expand_bracket(f, lo, hi, "T_inverse");
  const double root = solve_bracketed(
      f, [&](double sigma) { return time_to_axis_derivative(sigma, k, m); }, lo,
      hi);
  if (std::abs(time_to_axis(root, k, m) - t) > 1e-12 * std::max(1.0, t))
    throw ConvergenceError("T_inverse: residual tolerance not met");
  return root;
}

// Inverse of Sigma(t,.): the unique sigma >= T_inverse(t) with
// Sigma(t,sigma) = target.
inline double zeta(double t, double target, double k, const MeasureSpec& m) {
  detail::require_positive_k(k);
  if (!(t > 0.0)) throw DomainError("zeta needs t > 0");
  if (!(target >= 0.0)) throw DomainError("zeta target must be nonnegative");
  const double s_min = T_inverse(t, k, m);
  if (target == 0.0) return s_min;
  // Sigma loses at most (1+k) per unit time, so target + (1+k)t is always on
  // the far side of the root.
  double lo = s_min;
  double hi = target + (1.0 + k) * t;
  const auto f = [&](double sigma) { return sigma_closed(t, sigma, k, m) - target; };
  if (f(hi) < 0.0) expand_bracket(f, lo, hi, "zeta");
  // Derivative is undefined on the bracket's lower endpoint itself; a zero
  // return there just demotes that iteration to bisection.
  const auto df = [&](double sigma) {
    return sigma > s_min ? dsigma_ds(t, sigma, k, m) : 0.0;
  };
  const double root = solve_bracketed(f, df, lo, hi);
  if (std::abs(sigma_closed(t, root, k, m) - target) > 1e-12 * std::max(1.0, target))
    throw ConvergenceError("zeta: residual tolerance not met");
  return root;
}

}  // namespace gelfree
