#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qent {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (negative volume, T <= 0, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t actual)
      : Error("dimension mismatch: expected " + std::to_string(expected) +
              ", got " + std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  std::size_t expected() const noexcept { return expected_; }
  std::size_t actual() const noexcept { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

/// Raised when a matrix fails the doubly stochastic test. Carries the worst
/// offending line so callers can report it.
class NotDoublyStochastic : public Error {
 public:
  enum class Line { Row, Column, Entry };

  NotDoublyStochastic(Line line, std::size_t index, double deviation)
      : Error(describe(line, index, deviation)),
        line_(line),
        index_(index),
        deviation_(deviation) {}

  Line line() const noexcept { return line_; }
  std::size_t index() const noexcept { return index_; }
  double deviation() const noexcept { return deviation_; }

 private:
  static std::string describe(Line line, std::size_t index, double deviation) {
    const char* what = line == Line::Row      ? "row sum"
                       : line == Line::Column ? "column sum"
                                              : "negative entry in row";
    return std::string("not doubly stochastic: ") + what + " " +
           std::to_string(index) + " deviates by " + std::to_string(deviation);
  }

  Line line_;
  std::size_t index_;
  double deviation_;
};

/// An infinite sum hit its hard cap before capturing the requested mass.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double captured_mass)
      : Error(what), captured_mass_(captured_mass) {}

  double captured_mass() const noexcept { return captured_mass_; }

 private:
  double captured_mass_;
};

/// A quadrature did not reach its error target.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double estimated_error)
      : Error(what), estimated_error_(estimated_error) {}

  double estimated_error() const noexcept { return estimated_error_; }

 private:
  double estimated_error_;
};

/// The numerical propagator lost unitarity beyond the accepted threshold.
class UnitarityError : public Error {
 public:
  UnitarityError(const std::string& what, double defect)
      : Error(what), defect_(defect) {}

  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

}  // namespace qent
