// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace specpencil {

/// Base class of all errors raised by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NotSymmetricError : public Error {
public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
public:
  using Error::Error;
};

/// Neither matrix of a pencil is positive definite; the pencil may have an
/// infinite spectrum. Carries the dimension of the common kernel.
class BothSingularError : public Error {
public:
  explicit BothSingularError(int common_kernel_dim)
      : Error("both pencil matrices are singular (common kernel dimension " +
              std::to_string(common_kernel_dim) + ")"),
        common_kernel_dim(common_kernel_dim) {}
  int common_kernel_dim;
};

class NotDiagonalError : public Error {
public:
  using Error::Error;
};

/// All four diagonals vanish at one index: the eigenvalue is undetermined.
class ZeroRowError : public Error {
public:
  explicit ZeroRowError(int index)
      : Error("zero row at index " + std::to_string(index) +
              ": eigenvalue undetermined"),
        index(index) {}
  int index;
};

class TooFewPointsError : public Error {
public:
  using Error::Error;
};

class NonPositiveValueError : public Error {
public:
  using Error::Error;
};

class DegenerateSeedsError : public Error {
public:
  using Error::Error;
};

class MalformedMeshError : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(int line, const std::string& reason)
      : Error("parse error at line " + std::to_string(line) + ": " + reason),
        line(line),
        reason(reason) {}
  int line;
  std::string reason;
};

class IoError : public Error {
public:
  using Error::Error;
};

class NonStarShapedError : public Error {
public:
  using Error::Error;
};

class SingularConstraintError : public Error {
public:
  using Error::Error;
};

class SingularMassError : public Error {
public:
  using Error::Error;
};

/// Failure of one grid point of a parameter sweep, tagged with its location.
class GridPointError : public Error {
public:
  GridPointError(int alpha_index, int beta_index, double alpha, double beta,
                 const std::string& cause)
      : Error("sweep failed at grid point (" + std::to_string(alpha_index) +
              "," + std::to_string(beta_index) + "), alpha=" +
              std::to_string(alpha) + ", beta=" + std::to_string(beta) + ": " +
              cause),
        alpha_index(alpha_index),
        beta_index(beta_index),
        alpha(alpha),
        beta(beta),
        cause(cause) {}
  int alpha_index;
  int beta_index;
  double alpha;
  double beta;
  std::string cause;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace specpencil
