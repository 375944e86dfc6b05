#include "goamp/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace goamp {

namespace {

GaussHermiteRule build_rule(int n) {
  // Jacobi matrix of the monic probabilists' Hermite recurrence.
  Matrix jacobi = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    jacobi(i, i - 1) = std::sqrt(static_cast<double>(i));
    jacobi(i - 1, i) = jacobi(i, i - 1);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(jacobi, Eigen::EigenvaluesOnly);
  GaussHermiteRule rule;
  rule.nodes = eig.eigenvalues();
  rule.weights.resize(n);

  // w_i = 1 / sum_j p_j(x_i)^2 with orthonormal polynomials p_j; this keeps
  // full relative accuracy in the tails where eigenvector entries underflow.
  for (int i = 0; i < n; ++i) {
    const double x = rule.nodes[i];
    double p_prev = 0.0;
    double p = 1.0;
    double sum = 1.0;
    for (int j = 1; j < n; ++j) {
      const double next = (x * p - std::sqrt(static_cast<double>(j - 1)) * p_prev) / std::sqrt(static_cast<double>(j));
      p_prev = p;
      p = next;
      sum += p * p;
    }
    rule.weights[i] = 1.0 / sum;
  }
  rule.weights /= rule.weights.sum();
  return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite(int order) {
  require(order >= 1, "gauss_hermite: order must be positive");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussHermiteRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussHermiteRule>(build_rule(order));
  return *slot;
}

}  // namespace goamp
