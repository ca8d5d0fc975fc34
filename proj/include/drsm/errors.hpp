#pragma once

#include <stdexcept>
#include <string>

namespace drsm {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Shape disagreement between operands.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(what) {}
};

// Rank deficiency where the polar factor is not unique.
class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& what) : Error(what) {}
};

// Argument outside an operation's admissible range.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(what) {}
};

// Malformed configuration file, flag, or input file.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace drsm
