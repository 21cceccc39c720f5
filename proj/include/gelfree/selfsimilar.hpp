#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gelfree/errors.hpp"
#include "gelfree/laplace.hpp"
#include "gelfree/rootfind.hpp"

// Long-time limit profile in scaled variables:
//
//   L_star(s) = 1 + s - k W((s/k) e^{(1+s)/k}),
//
// with W the principal Lambert branch, plus the independent route through the
// auxiliary map h(z) = (1+s) z + k z ln z on [e^{-1/k}, 1]:
// L_star(s) = -k ln h^{-1}(s).  M_star, the distribution function whose
// transform L_star is, comes out of a Gaver-Stehfest inversion of
// L_star(s)/s.

namespace gelfree {

namespace detail {

// Solves w + ln w = y for the regime where e^y (the Lambert argument)
// overflows a double; Newton from w0 = y - ln y, monotone and quadratic.
inline double lambert_w_log(double y) {
  double w = y - std::log(y);
  for (int i = 0; i < 50; ++i) {
    const double step = (w + std::log(w) - y) * w / (w + 1.0);
    w -= step;
    if (std::abs(step) <= 1e-16 * w) break;
  }
  if (std::abs(w + std::log(w) - y) > 1e-13 * std::abs(y))
    throw ConvergenceError("lambert_w_log: residual tolerance not met");
  return w;
}

}  // namespace detail

// Principal Lambert W on [0, inf): the inverse of w -> w e^w.  Series start
// near 0, log-based starts elsewhere, Halley iterations to convergence.
inline double lambert_w(double z, double tol = 1e-13) {
  if (!(z >= 0.0)) throw DomainError("lambert_w is restricted to z >= 0");
  if (z == 0.0) return 0.0;
  double w;
  if (z <= 0.4) {
    w = z * (1.0 - z + 1.5 * z * z);
  } else if (z <= 2.718281828459045) {
    w = std::log1p(z);
  } else {
    const double lz = std::log(z);
    w = lz - std::log(lz);
  }
  for (int i = 0; i < 50; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    // Halley: f' = e^w (1+w), f'' = e^w (2+w).
    const double step = f / (ew * (w + 1.0) - (w + 2.0) * f / (2.0 * (w + 1.0)));
    w -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(w))) break;
  }
  if (std::abs(w * std::exp(w) - z) > tol * std::max(1.0, z))
    throw ConvergenceError("lambert_w: residual tolerance not met");
  return w;
}

struct SelfSimilarProfile {
  double k;
  double w_tol = 1e-13;
  int inversion_order = 12;

  explicit SelfSimilarProfile(double k_in, double w_tol_in = 1e-13,
                              int order = 12)
      : k(k_in), w_tol(w_tol_in), inversion_order(order) {
    detail::require_positive_k(k);
    if (!(w_tol > 0.0)) throw DomainError("w_tol must be positive");
    if (inversion_order < 8 || inversion_order > 18 || inversion_order % 2 != 0)
      throw DomainError("inversion order must be an even integer in [8,18]");
  }
};

inline double L_star(const SelfSimilarProfile& p, double s) {
  if (!(s >= 0.0)) throw DomainError("L_star needs s >= 0");
  if (s == 0.0) return 1.0;
  // ln of the W argument; evaluated once so the overflow cutover is exact.
  const double a = std::log(s / p.k) + (1.0 + s) / p.k;
  const double w =
      a <= 690.0 ? lambert_w(std::exp(a), p.w_tol) : detail::lambert_w_log(a);
  return 1.0 + s - p.k * w;
}

// Auxiliary increasing map h(z) = (1+s) z + k z ln z on [e^{-1/k}, 1]; its
// endpoint values s e^{-1/k} and s+1 are returned exactly.
inline double h_eval(double z, double s, double k) {
  detail::require_positive_k(k);
  if (!(s > 0.0)) throw DomainError("h needs s > 0");
  const double z_min = std::exp(-1.0 / k);
  if (!(z >= z_min) || !(z <= 1.0))
    throw DomainError("h argument outside [e^{-1/k}, 1]");
  if (z == z_min) return s * z;
  return (1.0 + s) * z + k * z * std::log(z);
}

inline double h_inverse(double y, double s, double k) {
  detail::require_positive_k(k);
  if (!(s > 0.0)) throw DomainError("h needs s > 0");
  const double z_min = std::exp(-1.0 / k);
  if (!(y >= s * z_min) || !(y <= s + 1.0))
    throw DomainError("h_inverse argument outside [s e^{-1/k}, s+1]");
  if (y == s * z_min) return z_min;
  if (y == s + 1.0) return 1.0;
  const auto f = [&](double z) { return h_eval(z, s, k) - y; };
  const auto df = [&](double z) { return 1.0 + s + k * (1.0 + std::log(z)); };
  const double root = solve_bracketed(f, df, z_min, 1.0);
  if (std::abs(h_eval(root, s, k) - y) > 1e-12 * std::max(1.0, std::abs(y)))
    throw ConvergenceError("h_inverse: residual tolerance not met");
  return root;
}

// sup over the grid of |L(t, t s) - L_star(s)|: the convergence gauge for
// the scaled solution approaching the limit profile.
inline double selfsim_error(const LaplaceEvaluator& ev,
                            const SelfSimilarProfile& p, double t,
                            std::span<const double> s_grid) {
  if (ev.k() != p.k)
    throw DomainError("selfsim_error: evaluator and profile disagree on k");
  if (!(t > 0.0)) throw DomainError("selfsim_error needs t > 0");
  double sup = 0.0;
  for (double s : s_grid) {
    if (!(s > 0.0)) throw DomainError("selfsim_error grid must be positive");
    sup = std::max(sup, std::abs(ev.L(t, t * s) - L_star(p, s)));
  }
  return sup;
}

// Gaver-Stehfest weights, 1-based in V[1..order]; they satisfy sum V_i = 0
// and sum V_i / i = 1 (the order-1 moments of the method), which the test
// suite pins down.  Factorials and the alternating sum are carried in long
// double: by order 18 the weights reach ~3e9 and cancel to O(1), so the
// identities hold to weight-magnitude times epsilon once stored as double.
inline std::vector<double> stehfest_weights(int order) {
  if (order < 8 || order > 18 || order % 2 != 0)
    throw DomainError("inversion order must be an even integer in [8,18]");
  const int half = order / 2;
  std::array<long double, 37> fact{};
  fact[0] = 1.0L;
  for (int i = 1; i <= 36; ++i) fact[i] = fact[i - 1] * i;
  std::vector<double> V(static_cast<size_t>(order) + 1, 0.0);
  for (int i = 1; i <= order; ++i) {
    long double sum = 0.0L;
    for (int j = (i + 1) / 2; j <= std::min(i, half); ++j) {
      sum += std::pow(static_cast<long double>(j), half) * fact[2 * j] /
             (fact[half - j] * fact[j] * fact[j - 1] * fact[i - j] *
              fact[2 * j - i]);
    }
    V[static_cast<size_t>(i)] =
        static_cast<double>(((half + i) % 2 == 0) ? sum : -sum);
  }
  return V;
}

// Distribution function of the limit measure at x, by inverting the
// transform of the CDF, L_star(s)/s: M(x) ~ sum_i V_i L_star(i ln2 / x)/i.
inline double M_star(const SelfSimilarProfile& p, double x) {
  if (!(x > 0.0)) throw DomainError("M_star needs x > 0");
  const std::vector<double> V = stehfest_weights(p.inversion_order);
  constexpr double ln2 = 0.6931471805599453;
  long double acc = 0.0L;
  for (int i = 1; i <= p.inversion_order; ++i)
    acc += static_cast<long double>(V[static_cast<size_t>(i)]) *
           L_star(p, i * ln2 / x) / i;
  return static_cast<double>(acc);
}

// The inversion is known to go unstable when pushed; these diagnostics are
// what the validation report surfaces instead of silently accepting output.
struct InversionDiagnostics {
  double max_monotonicity_drop = 0.0;   // worst decrease of M over the grid
  double max_order_disagreement = 0.0;  // order-(n-2) vs order-(n+2) spread
  std::vector<std::string> warnings;
};

inline InversionDiagnostics inversion_diagnostics(const SelfSimilarProfile& p,
                                                  std::span<const double> x_grid) {
  InversionDiagnostics diag;
  const int lo_order = std::max(8, p.inversion_order - 2);
  const int hi_order = std::min(18, p.inversion_order + 2);
  const SelfSimilarProfile lo(p.k, p.w_tol, lo_order);
  const SelfSimilarProfile hi(p.k, p.w_tol, hi_order);
  double prev = -std::numeric_limits<double>::infinity();
  for (double x : x_grid) {
    const double m = M_star(p, x);
    diag.max_monotonicity_drop = std::max(diag.max_monotonicity_drop, prev - m);
    diag.max_order_disagreement = std::max(
        diag.max_order_disagreement, std::abs(M_star(lo, x) - M_star(hi, x)));
    prev = m;
  }
  if (diag.max_monotonicity_drop > 5e-4)
    diag.warnings.push_back(
        "InversionWarning: M_star non-monotone beyond 5e-4 (drop " +
        std::to_string(diag.max_monotonicity_drop) + ")");
  if (diag.max_order_disagreement > 1e-3)
    diag.warnings.push_back(
        "InversionWarning: order-" + std::to_string(lo_order) + "/order-" +
        std::to_string(hi_order) + " disagreement " +
        std::to_string(diag.max_order_disagreement) + " exceeds 1e-3");
  return diag;
}

}  // namespace gelfree
