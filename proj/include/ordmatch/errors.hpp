#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ordmatch {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: dimension mismatch, bad permutation, unknown player.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Internal data failed an invariant it should satisfy by construction
/// (probabilities not summing to one, outcome for a non-existent class).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Adversary strategy is ill-formed for the model or the instance.
class StrategyError : public Error {
 public:
  using Error::Error;
};

/// Enumeration exceeded its budget. `count` is the number of nodes or
/// decision points reached when the limit was hit.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, std::size_t count) : Error(what), count_(count) {}
  std::size_t count() const { return count_; }

 private:
  std::size_t count_;
};

/// A structural law of the consumption process was violated on some branch.
class LawViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace ordmatch
