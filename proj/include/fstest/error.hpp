#pragma once

#include <stdexcept>
#include <string>

namespace fstest {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotSpdError : public Error {
 public:
  using Error::Error;
};

class NotSymmetricError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class EmptyDataError : public Error {
 public:
  using Error::Error;
};

/// A radial integral whose integrand does not decay fast enough at infinity.
class DivergentIntegralError : public Error {
 public:
  using Error::Error;
};

/// Raised when a test needs Var(Y1) and the family has no second moment.
class InfiniteVarianceError : public Error {
 public:
  using Error::Error;
};

class SingularCovarianceError : public Error {
 public:
  using Error::Error;
};

/// Malformed input. Carries 1-based row/column when known (0 = unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row = 0, std::size_t col = 0)
      : Error(row == 0 ? what
                       : what + " (line " + std::to_string(row) + ", column " +
                             std::to_string(col) + ")"),
        row_(row),
        col_(col) {}
  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fstest
