#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace metricnoise {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (bad shape, bad parameter).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A matrix failed the SPD floor or the symmetry tolerance.
class NotSpd : public Error {
 public:
  using Error::Error;
};

/// Distance evaluation failed for a particular pair of observations.
class PairError : public Error {
 public:
  PairError(std::size_t i, std::size_t j, const std::string& what)
      : Error("distance(" + std::to_string(i) + ", " + std::to_string(j) +
              "): " + what),
        i_(i),
        j_(j) {}

  std::size_t row() const noexcept { return i_; }
  std::size_t col() const noexcept { return j_; }

 private:
  std::size_t i_;
  std::size_t j_;
};

/// Numerical breakdown inside a simulation recursion.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace metricnoise
