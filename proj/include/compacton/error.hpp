#pragma once

#include <stdexcept>
#include <string>

namespace compacton {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejected input (bad sizes, out-of-range exponents, nonpositive radii).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A quotient or scale factor was requested for a bundle with a vanishing
/// integral it divides by.
class DegenerateBundle : public Error {
 public:
  using Error::Error;
};

/// No seed admits a point on the constrained Nehari set (lambda below the
/// feasibility threshold).
class Infeasible : public Error {
 public:
  using Error::Error;
};

class BracketFailure : public Error {
 public:
  using Error::Error;
};

class IntegratorFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace compacton
