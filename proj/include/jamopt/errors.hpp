#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jamopt {

/// Raised when a parameter falls outside its admissible interval.
class DomainError : public std::invalid_argument {
 public:
  DomainError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// An iterative solver stopped at its iteration limit.
class NoConvergence : public std::runtime_error {
 public:
  NoConvergence(const std::string& what, std::size_t iterations, double residual,
                std::vector<double> trace = {})
      : std::runtime_error(what),
        iterations_(iterations),
        residual_(residual),
        trace_(std::move(trace)) {}

  std::size_t iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }
  // Iterates visited before giving up (Algorithm-1 search only; may be truncated).
  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::size_t iterations_;
  double residual_;
  std::vector<double> trace_;
};

/// Brute-force scan bound does not bracket the argmax.
class CapTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Energy cost exceeds every representable breakpoint.
class Unbounded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Truncated state space holds non-negligible stationary mass near its cap.
class CapSuspicious : public std::runtime_error {
 public:
  CapSuspicious(const std::string& what, double tail_mass)
      : std::runtime_error(what), tail_mass_(tail_mass) {}

  double tail_mass() const noexcept { return tail_mass_; }

 private:
  double tail_mass_;
};

class InsufficientSamples : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace jamopt
