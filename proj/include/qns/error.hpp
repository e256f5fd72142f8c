#pragma once

#include <stdexcept>
#include <string>

namespace qns {

enum class ErrorKind {
  InvalidParameter,
  Dimension,
  Positivity,
  StepFailure,
  Consistency,
  Config,
};

class Error : public std::runtime_error
{
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what)
      , kind_(kind)
  {
  }

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised when a density drops below the positivity floor at a resolved node.
class PositivityError : public Error
{
 public:
  PositivityError(int node, double x0, double x1, double value, double floor);

  int node() const { return node_; }
  double value() const { return value_; }

 private:
  int node_;
  double value_;
};

}  // namespace qns
