#pragma once

#include "mcaux/errors.hpp"

namespace mcaux::harness {

// Bad or inconsistent experiment configuration (CLI exit code 1).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Missing or malformed input data (CLI exit code 2).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace mcaux::harness
