#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace legpinch {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class DegenerateChartError : public Error {
 public:
  using Error::Error;
};

class LegendrianViolation : public Error {
 public:
  using Error::Error;
};

/// A cubic tensor failed the traceless gate; `slice()` is the 0-based index
/// of the slice with the largest trace.
class TraceError : public Error {
 public:
  TraceError(const std::string& what, int slice, double trace)
      : Error(what), slice_(slice), trace_(trace) {}
  int slice() const noexcept { return slice_; }
  double trace() const noexcept { return trace_; }

 private:
  int slice_;
  double trace_;
};

/// The optimizer ran out of budget. Carries the best iterate seen.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, Eigen::VectorXd best, double value,
                   double residual)
      : Error(what), best_(std::move(best)), value_(value), residual_(residual) {}
  const Eigen::VectorXd& best_iterate() const noexcept { return best_; }
  double best_value() const noexcept { return value_; }
  double residual() const noexcept { return residual_; }

 private:
  Eigen::VectorXd best_;
  double value_;
  double residual_;
};

}  // namespace legpinch
