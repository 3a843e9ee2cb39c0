#pragma once

#include <stdexcept>
#include <string>

namespace kerrphc {

// Base of every error thrown by the library. `stage()` is filled in by the
// design pipeline so that callers can tell which step failed.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;

  const std::string& stage() const noexcept { return stage_; }
  void set_stage(std::string stage) { stage_ = std::move(stage); }

 private:
  std::string stage_;
};

// Precondition on a physical quantity violated (non-positive wavelength, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// API misuse: equal mode indices, overlapping qubits, truncation too small.
class UsageError : public Error {
 public:
  using Error::Error;
};

// A numerical routine could not deliver its contract (bracketing failure,
// degenerate null space, edge-degenerate group velocity, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Zero Kerr coupling: no finite flight time produces the pi/2 phase.
class NoNonlinearityError : public Error {
 public:
  using Error::Error;
};

// Requested frequency lies in a photonic band gap. Carries the gap edges
// in rad/s.
class BandGapError : public Error {
 public:
  BandGapError(const std::string& what, double omega_low, double omega_high)
      : Error(what), omega_low_(omega_low), omega_high_(omega_high) {}

  double omega_low() const noexcept { return omega_low_; }
  double omega_high() const noexcept { return omega_high_; }

 private:
  double omega_low_;
  double omega_high_;
};

}  // namespace kerrphc
