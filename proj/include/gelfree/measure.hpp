#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/expint.hpp>

#include "gelfree/detail/math.hpp"
#include "gelfree/errors.hpp"

// Initial measures nu_in (probability measures on (0,inf)) and their Laplace
// transforms.  Everything downstream consumes the bundle
//   L0(s)  = int e^{-sx} nu_in(dx)
//   L0'(s) = -int x e^{-sx} nu_in(dx)
//   L1(s)  = (L0(s) - 1)/s
//   L1'(s) = (s L0' + 1 - L0)/s^2
// where L1 and L1' are the cancellation-prone ones; they are evaluated
// through expm1 / exp_tail2 so they stay accurate uniformly in s (the naive
// quotients lose all digits below s ~ 1e-4).

namespace gelfree {

struct Atom {
  double mass;
  double weight;
};

// User-supplied density with quadrature controls.  `upper` may be infinity;
// the transform integrals are then truncated where the integrand falls below
// 1e-16 (assumes an eventually decreasing tail).
struct DensitySpec {
  std::function<double(double)> rho;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  double abs_tol = 1e-12;
  int max_depth = 15;
};

enum class MeasureFamily { Atomic, ExponentialDensity, PowerTailDensity, GenericDensity };

struct TransformValue {
  double s;
  double L0;
  double L0_prime;
  double L1;
  double L1_prime;
};

namespace detail {

inline double gk_integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol, int max_depth,
                           const char* what) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, max_depth, 1e-14, &err);
  if (!std::isfinite(v) || err > std::max(abs_tol, 1e-14 * std::abs(v)))
    throw MeasureError(std::string(what) + ": quadrature did not converge (error estimate " +
                       std::to_string(err) + ")");
  return v;
}

}  // namespace detail

class MeasureSpec {
 public:
  static MeasureSpec monodisperse(double mass = 1.0) {
    return atomic({{mass, 1.0}});
  }

  static MeasureSpec atomic(std::vector<Atom> atoms) {
    MeasureSpec m;
    m.family_ = MeasureFamily::Atomic;
    m.atoms_ = std::move(atoms);
    if (m.atoms_.empty()) throw MeasureError("atomic measure needs at least one atom");
    double total = 0.0;
    for (const Atom& a : m.atoms_) {
      if (!(a.mass > 0.0) || !(a.weight > 0.0))
        throw MeasureError("atom masses and weights must be strictly positive");
      total += a.weight;
    }
    m.mass_ = total;
    m.check_normalized();
    return m;
  }

  static MeasureSpec exponential(double rate) {
    if (!(rate > 0.0)) throw MeasureError("exponential rate must be positive");
    MeasureSpec m;
    m.family_ = MeasureFamily::ExponentialDensity;
    m.rate_ = rate;
    m.mass_ = 1.0;
    return m;
  }

  // Density cut/x^2 on (cut, inf); integrates to 1 for every cut > 0.  The
  // first moment diverges, which is exactly why this family is here.
  static MeasureSpec power_tail(double cut = 1.0) {
    if (!(cut > 0.0)) throw MeasureError("power-tail support cut must be positive");
    MeasureSpec m;
    m.family_ = MeasureFamily::PowerTailDensity;
    m.cut_ = cut;
    m.mass_ = 1.0;
    return m;
  }

  static MeasureSpec generic(DensitySpec density) {
    if (!density.rho) throw MeasureError("generic density needs a callable");
    if (!(density.lower >= 0.0) || !(density.upper > density.lower))
      throw MeasureError("generic density support must satisfy 0 <= lower < upper");
    MeasureSpec m;
    m.family_ = MeasureFamily::GenericDensity;
    m.density_ = std::move(density);
    m.mass_ = detail::gk_integrate(m.density_.rho, m.density_.lower, m.density_.upper,
                                   m.density_.abs_tol, m.density_.max_depth, "total_mass");
    m.check_normalized();
    return m;
  }

  MeasureFamily family() const { return family_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  double rate() const { return rate_; }
  double cut() const { return cut_; }

  double total_mass() const { return mass_; }

  TransformValue transform(double s) const {
    if (!(s > 0.0)) throw DomainError("eval_transform: s must be positive");
    TransformValue tv{};
    tv.s = s;
    switch (family_) {
      case MeasureFamily::Atomic: {
        double L0 = 0.0, L0p = 0.0, L1 = 0.0, L1p = 0.0;
        for (const Atom& a : atoms_) {
          const double u = s * a.mass;
          const double e = std::exp(-u);
          L0 += a.weight * e;
          L0p -= a.weight * a.mass * e;
          L1 += a.weight * std::expm1(-u);
          L1p += a.weight * detail::exp_tail2(u);
        }
        tv.L0 = L0;
        tv.L0_prime = L0p;
        tv.L1 = L1 / s;
        tv.L1_prime = L1p / (s * s);
        break;
      }
      case MeasureFamily::ExponentialDensity: {
        const double d = rate_ + s;
        tv.L0 = rate_ / d;
        tv.L0_prime = -rate_ / (d * d);
        tv.L1 = -1.0 / d;
        tv.L1_prime = 1.0 / (d * d);
        break;
      }
      case MeasureFamily::PowerTailDensity: {
        // Unit-cut forms at u = s*cut (E1 is the exponential integral):
        //   L0  = e^{-u} - u E1(u)        L0' = -E1(u)
        //   L1  = expm1(-u)/u - E1(u)     L1' = -expm1(-u)/u^2
        // then rescaled; note E1 drops out of L1' exactly.
        const double u = s * cut_;
        const double e1 = (u > 700.0) ? 0.0 : boost::math::expint(1, u);
        tv.L0 = std::exp(-u) - u * e1;
        tv.L0_prime = -cut_ * e1;
        tv.L1 = cut_ * (std::expm1(-u) / u - e1);
        tv.L1_prime = -cut_ * cut_ * std::expm1(-u) / (u * u);
        break;
      }
      case MeasureFamily::GenericDensity: {
        eval_generic(s, tv);
        break;
      }
    }
    validate(tv);
    return tv;
  }

  // Inverse CDF where it exists in closed form; drives particle-system
  // initialization.  Generic densities are not samplable here.
  bool has_quantile() const {
    return family_ == MeasureFamily::ExponentialDensity ||
           family_ == MeasureFamily::PowerTailDensity;
  }

  double quantile(double u) const {
    switch (family_) {
      case MeasureFamily::ExponentialDensity:
        return -std::log1p(-u) / rate_;
      case MeasureFamily::PowerTailDensity:
        return cut_ / (1.0 - u);
      default:
        throw MeasureError("measure family has no closed-form quantile");
    }
  }

 private:
  MeasureSpec() = default;

  void check_normalized() const {
    if (std::abs(mass_ - 1.0) > 1e-12)
      throw MeasureError("measure must be a probability measure: total mass " +
                         std::to_string(mass_));
  }

  void eval_generic(double s, TransformValue& tv) const {
    const double lo = density_.lower;
    double hi = density_.upper;
    double tail_mass = 0.0;
    if (!std::isfinite(hi)) {
      // Truncate where the transform integrands are negligible; the cut
      // contributions of the non-decaying L1/L1' integrands are restored
      // analytically below (e^{-sx} ~ 0 past the cut, so the tail of
      // (1 - e^{-sx}) rho is just the tail mass of rho).
      double x = std::max({lo, 1.0, 1.0 / s});
      int guard = 0;
      while (std::exp(-s * x) * (1.0 + x) * density_.rho(x) >= 1e-16 && guard++ < 2000)
        x *= 2.0;
      hi = x;
      const double trunc_mass =
          detail::gk_integrate(density_.rho, lo, hi, density_.abs_tol,
                               density_.max_depth, "eval_transform");
      tail_mass = std::max(0.0, mass_ - trunc_mass);
    }
    const auto& rho = density_.rho;
    const double tol = density_.abs_tol;
    const int depth = density_.max_depth;
    tv.L0 = detail::gk_integrate(
        [&](double x) { return std::exp(-s * x) * rho(x); }, lo, hi, tol, depth,
        "eval_transform(L0)");
    tv.L0_prime = -detail::gk_integrate(
        [&](double x) { return x * std::exp(-s * x) * rho(x); }, lo, hi, tol,
        depth, "eval_transform(L0')");
    tv.L1 = detail::gk_integrate(
                [&](double x) { return std::expm1(-s * x) / s * rho(x); }, lo,
                hi, tol, depth, "eval_transform(L1)") -
            tail_mass / s;
    tv.L1_prime = detail::gk_integrate(
                      [&](double x) { return detail::exp_tail2(s * x) / (s * s) * rho(x); },
                      lo, hi, tol, depth, "eval_transform(L1')") +
                  tail_mass / (s * s);
  }

  static void validate(const TransformValue& tv) {
    // Structural sign checks with slack for quadrature noise and for L0
    // underflowing at huge s; their violation means a broken density, not a
    // rounding quirk.
    constexpr double kSlack = 1e-9;
    if (!(tv.L0 >= -kSlack) || !(tv.L0 <= 1.0 + kSlack) ||
        !(tv.L0_prime <= kSlack) || !(tv.L1 <= 0.0) || !(tv.L1_prime >= -kSlack))
      throw MeasureError("transform violates its sign structure at s = " +
                         std::to_string(tv.s));
  }

  MeasureFamily family_ = MeasureFamily::Atomic;
  std::vector<Atom> atoms_;
  double rate_ = 1.0;
  double cut_ = 1.0;
  DensitySpec density_;
  double mass_ = 1.0;
};

inline double total_mass(const MeasureSpec& m) { return m.total_mass(); }

inline TransformValue eval_transform(const MeasureSpec& m, double s) {
  return m.transform(s);
}

// ---------------------------------------------------------------------------
// Complete-monotonicity checker: f is completely monotone iff
// (-1)^n d^n f / ds^n >= 0; the numerical surrogate replaces derivatives by
// forward differences, so the requirement is (-1)^n Delta_h^n f(s) >= -tol.

struct MonotonicityViolation {
  double s;
  int order;
  double value;  // (-1)^n Delta^n f(s), negative beyond tolerance
};

struct MonotonicityReport {
  int max_order = 0;
  double h = 0.0;
  double tol = 0.0;
  std::vector<MonotonicityViolation> violations;
  bool passed() const { return violations.empty(); }
};

inline MonotonicityReport check_complete_monotone(
    const std::function<double(double)>& f, std::span<const double> s_grid,
    int max_order, double h, double tol = 1e-9) {
  if (max_order < 1 || max_order > 10)
    throw DomainError("check_complete_monotone: order must be in [1,10]");
  if (!(h > 0.0)) throw DomainError("check_complete_monotone: h must be positive");
  MonotonicityReport rep;
  rep.max_order = max_order;
  rep.h = h;
  rep.tol = tol;
  std::vector<double> d(static_cast<size_t>(max_order) + 1);
  for (double s : s_grid) {
    if (!(s > h * max_order))
      throw DomainError("check_complete_monotone: grid point too close to 0 for this h");
    for (int j = 0; j <= max_order; ++j) d[j] = f(s + j * h);
    double sign = -1.0;  // (-1)^n for n = 1, 2, ...
    for (int n = 1; n <= max_order; ++n) {
      for (int j = 0; j <= max_order - n; ++j) d[j] = d[j + 1] - d[j];
      const double v = sign * d[0];
      if (v < -tol) rep.violations.push_back({s, n, v});
      sign = -sign;
    }
  }
  return rep;
}

}  // namespace gelfree
