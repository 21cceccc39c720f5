#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gelfree {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A measure specification is structurally invalid, fails its normalization
// check, or its quadrature did not converge.
class MeasureError : public Error {
 public:
  using Error::Error;
};

// A characteristic was evaluated at or beyond its hitting time, where the
// closed forms stop being defined.
class PastSingularityError : public Error {
 public:
  using Error::Error;
};

// A bracketed root search failed to converge or to establish a bracket.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// The reference integrator produced a path violating properties that are
// mathematically guaranteed; signals a bug, not a data problem.
class OracleInconsistency : public Error {
 public:
  using Error::Error;
};

// Total jump rate underflowed; the particle system cannot advance.
class StalledError : public Error {
 public:
  using Error::Error;
};

// A simulation tripped its event-count or mean-mass guard.  For the k = 0
// baseline this is the expected gelation signature, so the trigger state is
// carried along for reporting.
class ExplosionDetected : public Error {
 public:
  ExplosionDetected(const std::string& msg, double sim_time,
                    std::uint64_t event_count, double mean_mass)
      : Error(msg),
        sim_time(sim_time),
        event_count(event_count),
        mean_mass(mean_mass) {}

  double sim_time;
  std::uint64_t event_count;
  double mean_mass;
};

// Bad command line usage or config file contents (maps to exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace gelfree
