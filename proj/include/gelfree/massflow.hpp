#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gelfree/detail/math.hpp"
#include "gelfree/errors.hpp"
#include "gelfree/measure.hpp"

// N-particle Markov jump process for the mass measure nu.  Each particle
// carries weight 1/N and jumps at rate (1+k) x_i:
//
//   with probability 1/(1+k):  x_i -> x_i + x_J, J uniform on {1..N}
//                              (self-pairing allowed: the mean-field sum
//                              includes i, and excluding it is an O(1/N) bias)
//   otherwise:                 x_i -> U x_i, U uniform on (0,1)
//                              (the daughter-mass density is uniform)
//
// so the total jump rate is R = (1+k) sum_i x_i.  With these rates the
// expected drift of (1/N) sum_i theta(x_i) reproduces the weak form
//
//   d/dt <theta, nu> = int int x [theta(x+y) - theta(x)] nu(dx) nu(dy)
//                    + k int [int_0^x theta(y) dy - x theta(x)] nu(dx)
//
// on the empirical measure, which is what the generator-consistency test
// pins down.  Particle count never changes, so total nu-mass is exactly 1.

namespace gelfree {

inline constexpr std::size_t kNoPartner = static_cast<std::size_t>(-1);

enum class JumpKind { Coagulation, Fragmentation };

struct EventRecord {
  double sim_time;
  JumpKind kind;
  std::size_t particle;
  std::size_t partner;  // kNoPartner for fragmentation
  double new_mass;
};

// Fenwick tree over the masses: point update and size-biased sampling in
// O(log N).  Totals drift by accumulated roundoff, so callers rebuild it
// periodically.
class PrefixSumTree {
 public:
  explicit PrefixSumTree(std::vector<double> values)
      : values_(std::move(values)) {
    rebuild();
  }

  std::size_t size() const { return values_.size(); }
  double total() const { return total_; }
  double value(std::size_t i) const { return values_[i]; }

  void set(std::size_t i, double v) {
    const double delta = v - values_[i];
    values_[i] = v;
    total_ += delta;
    for (std::size_t n = i + 1; n <= values_.size(); n += n & (~n + 1))
      tree_[n] += delta;
  }

  // Smallest index with prefix sum exceeding target; target in [0, total).
  std::size_t sample(double target) const {
    std::size_t idx = 0;
    for (std::size_t bit = top_bit_; bit != 0; bit >>= 1) {
      const std::size_t next = idx + bit;
      if (next <= values_.size() && tree_[next] < target) {
        idx = next;
        target -= tree_[next];
      }
    }
    return std::min(idx, values_.size() - 1);  // clamp roundoff past the end
  }

  void rebuild() {
    const std::size_t n = values_.size();
    tree_.assign(n + 1, 0.0);
    total_ = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      total_ += values_[i];
      tree_[i + 1] += values_[i];
      const std::size_t parent = (i + 1) + ((i + 1) & (~(i + 1) + 1));
      if (parent <= n) tree_[parent] += tree_[i + 1];
    }
    top_bit_ = 1;
    while (top_bit_ * 2 <= n) top_bit_ *= 2;
  }

 private:
  std::vector<double> values_;
  std::vector<double> tree_;
  double total_ = 0.0;
  std::size_t top_bit_ = 1;
};

class ParticleSystem {
 public:
  ParticleSystem(std::vector<double> masses, double k, std::uint64_t seed)
      : k_(k), rng_(seed), tree_(std::move(masses)) {
    if (!(k_ >= 0.0)) throw DomainError("fragmentation constant must be nonnegative");
    if (tree_.size() == 0)
      throw MeasureError("particle system needs at least one particle");
    for (std::size_t i = 0; i < tree_.size(); ++i)
      if (!(tree_.value(i) > 0.0))
        throw MeasureError("particle masses must be strictly positive");
    initial_mean_ = tree_.total() / static_cast<double>(tree_.size());
  }

  std::size_t size() const { return tree_.size(); }
  double k() const { return k_; }
  double sim_time() const { return sim_time_; }
  std::uint64_t event_count() const { return event_count_; }
  double mass(std::size_t i) const { return tree_.value(i); }
  double total_mass_sum() const { return tree_.total(); }
  double mean_mass() const { return tree_.total() / static_cast<double>(size()); }
  double initial_mean_mass() const { return initial_mean_; }
  const PrefixSumTree& rate_index() const { return tree_; }

  // Time of the next jump, drawing (and pinning) its holding time if not
  // already scheduled.  The schedule survives until step() consumes it, so
  // observers can be sampled against the pre-jump state.
  double peek_next_time() {
    if (!has_pending_) {
      const double R = (1.0 + k_) * tree_.total();
      if (R < 1e-300)
        throw StalledError("total jump rate underflowed at t = " +
                           std::to_string(sim_time_));
      pending_time_ = sim_time_ + detail::exponential_draw(rng_, R);
      has_pending_ = true;
    }
    return pending_time_;
  }

  // Moves the clock without any jump; only valid up to the next scheduled
  // jump time (the state is constant on that interval).
  void fast_forward(double t) {
    if (!(t >= sim_time_) || (has_pending_ && t > pending_time_))
      throw DomainError("fast_forward outside the current holding interval");
    sim_time_ = t;
  }

  EventRecord step() {
    // Draw order is part of the determinism contract: holding time, particle,
    // branch, then partner-or-U.
    const double t_jump = peek_next_time();
    has_pending_ = false;
    const double total = tree_.total();
    const std::size_t i = tree_.sample(detail::uniform53(rng_) * total);
    const bool coagulate = detail::uniform53(rng_) * (1.0 + k_) < 1.0;
    EventRecord rec{};
    rec.particle = i;
    if (coagulate) {
      const std::size_t j = detail::uniform_index(rng_, size());
      rec.kind = JumpKind::Coagulation;
      rec.partner = j;
      rec.new_mass = tree_.value(i) + tree_.value(j);
    } else {
      rec.kind = JumpKind::Fragmentation;
      rec.partner = kNoPartner;
      rec.new_mass = tree_.value(i) * detail::uniform_open(rng_);
    }
    tree_.set(i, rec.new_mass);
    sim_time_ = t_jump;
    ++event_count_;
    rec.sim_time = sim_time_;
    if (++events_since_rebuild_ >= kRebuildInterval) {
      tree_.rebuild();
      events_since_rebuild_ = 0;
    }
    return rec;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  static constexpr std::uint64_t kRebuildInterval = 1'000'000;

  double k_;
  double sim_time_ = 0.0;
  bool has_pending_ = false;
  double pending_time_ = 0.0;
  std::uint64_t event_count_ = 0;
  std::uint64_t events_since_rebuild_ = 0;
  double initial_mean_ = 0.0;
  std::mt19937_64 rng_;
  PrefixSumTree tree_;
};

inline EventRecord step(ParticleSystem& sys) { return sys.step(); }

// Draws N initial masses from the measure.  Atoms get proportional counts
// with the leftover slots sampled from the fractional parts; densities go
// through the inverse CDF; anything else is not samplable.
inline ParticleSystem init_from_measure(const MeasureSpec& m, std::size_t N,
                                        std::uint64_t seed, double k = 1.0) {
  if (N < 1) throw DomainError("init_from_measure needs N >= 1");
  std::mt19937_64 rng(seed);
  std::vector<double> masses;
  masses.reserve(N);
  switch (m.family()) {
    case MeasureFamily::Atomic: {
      const std::vector<Atom>& atoms = m.atoms();
      std::vector<double> frac(atoms.size());
      double frac_total = 0.0;
      for (std::size_t a = 0; a < atoms.size(); ++a) {
        const double exact = atoms[a].weight * static_cast<double>(N);
        const double base = std::floor(exact);
        frac[a] = exact - base;
        frac_total += frac[a];
        masses.insert(masses.end(), static_cast<std::size_t>(base),
                      atoms[a].mass);
      }
      while (masses.size() < N) {
        double target = detail::uniform53(rng) * frac_total;
        std::size_t pick = atoms.size() - 1;
        for (std::size_t a = 0; a < atoms.size(); ++a) {
          if (target < frac[a]) {
            pick = a;
            break;
          }
          target -= frac[a];
        }
        masses.push_back(atoms[pick].mass);
      }
      masses.resize(N);  // guard against weight roundoff overshooting
      break;
    }
    case MeasureFamily::ExponentialDensity:
    case MeasureFamily::PowerTailDensity: {
      for (std::size_t i = 0; i < N; ++i)
        masses.push_back(m.quantile(detail::uniform_open(rng)));
      break;
    }
    default:
      throw MeasureError("measure family cannot be sampled for initialization");
  }
  // Hand the stream state onward so initialization and dynamics share one
  // deterministic sequence.
  ParticleSystem sys(std::move(masses), k, seed);
  sys.rng() = rng;
  return sys;
}

struct Observation {
  double estimate;
  double std_error;
};

struct Observer {
  std::string name;
  std::function<Observation(const ParticleSystem&)> fn;
};

struct ObservationLog {
  std::vector<double> times;
  std::vector<std::string> observer_names;
  // series[observer][time index]
  std::vector<std::vector<Observation>> series;
  std::uint64_t event_count = 0;
  double wall_seconds = 0.0;
};

struct RunCaps {
  std::uint64_t max_events = 100'000'000;
  double mean_mass_factor = 1000.0;
};

// Advances the system to t_end, sampling each observer at the requested
// times (which must be sorted).  The jump chain is sampled cadlag: an
// observation at time tau sees the state after the last event at or before
// tau.  Explosion (the k=0 gelation signature) surfaces as an exception
// carrying the time and event budget at detection.
inline ObservationLog run_until(ParticleSystem& sys, double t_end,
                                std::span<const Observer> observers,
                                std::span<const double> observe_at = {},
                                const RunCaps& caps = {}) {
  if (!(t_end > sys.sim_time()))
    throw DomainError("run_until needs t_end past the current simulation time");
  const auto start = std::chrono::steady_clock::now();
  ObservationLog log;
  log.series.resize(observers.size());
  for (const Observer& o : observers) log.observer_names.push_back(o.name);

  std::size_t next_obs = 0;
  while (next_obs < observe_at.size() && observe_at[next_obs] < sys.sim_time())
    ++next_obs;

  const double mean_cap = caps.mean_mass_factor * sys.initial_mean_mass();
  for (;;) {
    const double t_next = sys.peek_next_time();
    // Everything due strictly before the next jump is sampled against the
    // current (pre-jump) state.
    while (next_obs < observe_at.size() && observe_at[next_obs] < t_next &&
           observe_at[next_obs] <= t_end) {
      log.times.push_back(observe_at[next_obs]);
      for (std::size_t o = 0; o < observers.size(); ++o)
        log.series[o].push_back(observers[o].fn(sys));
      ++next_obs;
    }
    if (t_next > t_end) break;
    sys.step();
    if (sys.event_count() >= caps.max_events)
      throw ExplosionDetected("event cap reached", sys.sim_time(),
                              sys.event_count(), sys.mean_mass());
    if (sys.mean_mass() > mean_cap)
      throw ExplosionDetected("mean mass exceeded explosion cap",
                              sys.sim_time(), sys.event_count(),
                              sys.mean_mass());
  }
  sys.fast_forward(t_end);
  log.event_count = sys.event_count();
  log.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return log;
}

inline double empirical_laplace(const ParticleSystem& sys, double s) {
  if (!(s > 0.0)) throw DomainError("empirical_laplace needs s > 0");
  double acc = 0.0;
  for (std::size_t i = 0; i < sys.size(); ++i) acc += std::exp(-s * sys.mass(i));
  return acc / static_cast<double>(sys.size());
}

// Estimate plus a per-particle-sample standard error (the particles are the
// i.i.d.-at-initialization sample; correlations built up by the dynamics are
// what the replicate machinery is for).
inline Observation empirical_laplace_observation(const ParticleSystem& sys,
                                                 double s) {
  const std::size_t n = sys.size();
  double acc = 0.0, acc2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::exp(-s * sys.mass(i));
    acc += e;
    acc2 += e * e;
  }
  const double mean = acc / static_cast<double>(n);
  const double var =
      std::max(0.0, acc2 / static_cast<double>(n) - mean * mean);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

inline Observation mean_mass_observation(const ParticleSystem& sys) {
  const std::size_t n = sys.size();
  double acc = 0.0, acc2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += sys.mass(i);
    acc2 += sys.mass(i) * sys.mass(i);
  }
  const double mean = acc / static_cast<double>(n);
  const double var =
      std::max(0.0, acc2 / static_cast<double>(n) - mean * mean);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

// Fraction of particles with mass at most x/t for each grid point x: the
// empirical version of the scaled distribution function M(t, x/t).
inline std::vector<double> empirical_scaled_cdf(const ParticleSystem& sys,
                                                std::span<const double> x_grid) {
  if (!(sys.sim_time() > 0.0))
    throw DomainError("empirical_scaled_cdf needs simulation time t > 0");
  std::vector<double> sorted;
  sorted.reserve(sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i) sorted.push_back(sys.mass(i));
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(x_grid.size());
  for (double x : x_grid) {
    const auto it =
        std::upper_bound(sorted.begin(), sorted.end(), x / sys.sim_time());
    out.push_back(static_cast<double>(it - sorted.begin()) /
                  static_cast<double>(sorted.size()));
  }
  return out;
}

}  // namespace gelfree
