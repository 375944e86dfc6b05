#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace goamp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Precondition violated by a caller-supplied argument.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input is well-formed but degenerate for the requested quantity
/// (zero-norm vectors, singular initialization).
class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A message-passing divergence hit 0 or 1 within tolerance, so an
/// Onsager correction would divide by zero.
class IllConditioned : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidArgument(what);
}

}  // namespace goamp
