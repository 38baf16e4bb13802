#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dofnet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: schema violations, layering violations,
/// unknown nodes, scheme/network mismatches. The CLI maps these to exit 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A candidate bottleneck node has more parents than the exhaustive subset
/// search is allowed to enumerate.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A relay was asked to transmit a linear form its received history does not
/// determine.
class ReconstructionInfeasible : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A channel realization lacks a gain the scheme needs.
class MissingGain : public Error {
 public:
  using Error::Error;
};

/// Execution failure inside a Monte Carlo run; carries the per-trial seed so
/// the failing realization can be replayed.
class TrialFailure : public Error {
 public:
  TrialFailure(const std::string& what, std::uint64_t trial_seed, int trial)
      : Error(what), trial_seed_(trial_seed), trial_(trial) {}

  std::uint64_t trial_seed() const noexcept { return trial_seed_; }
  int trial() const noexcept { return trial_; }

 private:
  std::uint64_t trial_seed_;
  int trial_;
};

}  // namespace dofnet
