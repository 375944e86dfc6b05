#pragma once

#include "goamp/sensing_operator.hpp"
#include "goamp/types.hpp"

#include <vector>

namespace goamp {

/// Non-owning view of either an SvdSensingOperator or an explicit matrix.
class LinearMap {
 public:
  LinearMap(const SvdSensingOperator& op) : op_(&op) {}
  LinearMap(const Matrix& a) : dense_(&a) {}

  Index rows() const { return op_ ? op_->rows() : dense_->rows(); }
  Index cols() const { return op_ ? op_->cols() : dense_->cols(); }
  Vector apply(const Vector& x) const { return op_ ? op_->apply(x) : Vector(*dense_ * x); }
  Vector adjoint(const Vector& y) const { return op_ ? op_->apply_adjoint(y) : Vector(dense_->transpose() * y); }
  Vector column(Index j) const { return op_ ? op_->column(j) : Vector(dense_->col(j)); }

 private:
  const SvdSensingOperator* op_ = nullptr;
  const Matrix* dense_ = nullptr;
};

struct LassoConfig {
  double lambda = 1e-3;
  int max_iters = 1000;
  double initial_step = 1.0;  // L0
  double growth = 2.0;        // eta
  bool restart = true;
};

struct GreedyConfig {
  Index k = 1;
  int max_iters = 20;
  double step = 1.0;
};

Vector soft_threshold(const Vector& x, double tau);

/// (1/2M) ||y - A x||^2 + lambda ||x||_1.
double lasso_objective(const LinearMap& a, const Vector& y, const Vector& x, double lambda);

struct FistaResult {
  Vector x;                        // best-seen iterate
  std::vector<double> objective;   // per-iteration objective of the last iterate
  std::vector<double> best_objective;
};

FistaResult fista(const LinearMap& a, const Vector& y, const LassoConfig& cfg);

/// Lasso applied to binary data.
FistaResult glasso(const LinearMap& a, const Vector& y, const LassoConfig& cfg);

/// `count` log-spaced values over [1e-4, 1] * max|A^T y| / M, ascending.
std::vector<double> lambda_grid(const LinearMap& a, const Vector& y, int count = 15);

struct OmpResult {
  Vector x;
  std::vector<Index> support;  // selection order
  bool rank_deficient = false;
};

OmpResult omp(const LinearMap& a, const Vector& y, Index k);

/// Indices of the k largest |x_i|, lowest index first among ties; sorted ascending.
std::vector<Index> top_k_indices(const Vector& x, Index k);
Vector top_k(const Vector& x, Index k);

/// Unit-norm, k-sparse estimate. Starts from x0 if given, otherwise
/// from normalize(Top_k(A^T y)).
Vector biht(const LinearMap& a, const Vector& y, const GreedyConfig& cfg, const Vector* x0 = nullptr);

}  // namespace goamp
