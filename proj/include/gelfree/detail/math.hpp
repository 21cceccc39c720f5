#pragma once

#include <cmath>
#include <cstdint>

// Small numeric helpers shared across the library: cancellation-safe
// special expressions and deterministic RNG plumbing.

namespace gelfree::detail {

// exp_tail2(u) = 1 - (1+u) e^{-u} = integral of v e^{-v} over [0,u].
// Both closed-form terms are ~1 - u while the value is ~u^2/2, so the direct
// expression loses half the digits for small u; switch to the alternating
// series sum_{n>=2} (-1)^n (n-1) u^n / n! below u = 0.5.
inline double exp_tail2(double u) {
  if (u > 0.5) return -std::expm1(-u) - u * std::exp(-u);
  double term = u * u / 2.0;  // n = 2 term
  double sum = term;
  for (int n = 3; n <= 24; ++n) {
    term *= -u / n;
    const double contrib = term * (n - 1);
    sum += contrib;
    if (std::abs(contrib) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// log1p_minus_x(u) = log(1+u) - u, stable for |u| << 1 where the direct
// difference cancels (value ~ -u^2/2).  Series: sum_{n>=2} (-1)^{n+1} u^n / n.
inline double log1p_minus_x(double u) {
  if (std::abs(u) > 0.25) return std::log1p(u) - u;
  double p = u * u;
  double sign = -1.0;
  double sum = 0.0;
  for (int n = 2; n <= 40; ++n) {
    const double contrib = sign * p / n;
    sum += contrib;
    if (std::abs(contrib) < 1e-18 * (std::abs(sum) + 1e-300)) break;
    p *= u;
    sign = -sign;
  }
  return sum;
}

// --- deterministic uniforms on top of std::mt19937_64 ------------------
// The standard fixes mt19937_64's output stream bit-for-bit but not the
// floating-point distributions, so the conversions are done by hand.

template <class Urbg>
inline double uniform53(Urbg& g) {  // [0, 1)
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

template <class Urbg>
inline double uniform_open(Urbg& g) {  // (0, 1)
  return (static_cast<double>(g() >> 12) + 0.5) * 0x1.0p-52;
}

template <class Urbg>
inline double exponential_draw(Urbg& g, double rate) {
  return -std::log(uniform_open(g)) / rate;
}

// Unbiased-to-2^-64 index draw via 128-bit multiply; avoids the
// implementation-defined std::uniform_int_distribution.
template <class Urbg>
inline std::uint64_t uniform_index(Urbg& g, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(g()) * n) >> 64);
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Replicate r of a base seed: advance a splitmix64 stream r+1 times.  Keeps
// replicate streams decorrelated and is trivial to document and reproduce.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t replicate) {
  std::uint64_t state = base;
  std::uint64_t out = 0;
  for (std::uint64_t i = 0; i <= replicate; ++i) out = splitmix64(state);
  return out;
}

}  // namespace gelfree::detail
