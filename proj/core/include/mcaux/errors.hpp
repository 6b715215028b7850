#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mcaux {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller broke a documented precondition (negative mean, bad target rate...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Target density is zero at the requested point. Not a numeric failure.
class ZeroDensityError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

// A model broke its promise (bounds or Lipschitz inequality).
class ModelContractError : public Error {
 public:
  ModelContractError(std::size_t index, const std::string& what)
      : Error(what + " (datum " + std::to_string(index) + ")"), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class InvalidWeightsError : public Error {
 public:
  using Error::Error;
};

// Truncated enumeration lost more mass than allowed.
class EnumerationError : public Error {
 public:
  using Error::Error;
};

// Kernel is not reversible enough for a self-adjoint spectral analysis.
class NotReversibleError : public Error {
 public:
  using Error::Error;
};

class UndefinedEssError : public Error {
 public:
  using Error::Error;
};

}  // namespace mcaux
