#pragma once

#include "goamp/dct.hpp"
#include "goamp/random.hpp"
#include "goamp/types.hpp"

#include <memory>
#include <vector>

namespace goamp {

/// Discrete law of the eigenvalue variable Lambda: atoms with weights summing to one.
struct SpectralModel {
  std::vector<double> values;
  std::vector<double> weights;

  /// E[f(Lambda)] as an exact finite sum over the atoms.
  template <class F>
  double expect(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) acc += weights[i] * f(values[i]);
    return acc;
  }

  double mean() const {
    return expect([](double l) { return l; });
  }
  double min_value() const;
  double max_value() const;
};

/// Implicit M x N matrix A = U_dct P1 Sigma P2 V_dct.
///
/// Forward: N-point DCT, gather through perm2 (keeping the first M
/// coordinates), scale by sigma, scatter through perm1, M-point DCT.
/// The adjoint runs the same chain backwards with inverse DCTs.
class SvdSensingOperator {
 public:
  SvdSensingOperator(Index m, Index n, Vector singular_values, std::vector<Index> perm1,
                     std::vector<Index> perm2);

  Index rows() const { return m_; }
  Index cols() const { return n_; }

  /// Descending, length M.
  const Vector& singular_values() const { return sigma_; }
  /// lambda_i = sigma_i^2 / N, unit mean.
  const Vector& eigenvalues() const { return lambda_; }
  double condition_number() const { return sigma_[0] / sigma_[m_ - 1]; }
  const std::vector<Index>& perm1() const { return perm1_; }
  const std::vector<Index>& perm2() const { return perm2_; }

  Vector apply(const Vector& x) const;
  Vector apply_adjoint(const Vector& y) const;

  /// (gamma I + A A^T)^{-1} r, diagonal in the left singular basis.
  Vector resolvent_apply(double gamma, const Vector& r) const;

  /// Column j of A (one forward application to e_j).
  Vector column(Index j) const;
  /// Explicit matrix; only sensible for small sizes.
  Matrix dense() const;

 private:
  // w = (U_dct P1)^T y and its inverse.
  Vector left_basis_adjoint(const Vector& y) const;
  Vector left_basis_apply(const Vector& c) const;

  Index m_;
  Index n_;
  Vector sigma_;
  Vector lambda_;
  std::vector<Index> perm1_;
  std::vector<Index> perm2_;
  OrthonormalDct dct_m_;
  OrthonormalDct dct_n_;
};

/// sigma_i = c r^{i-1} with sigma_1 / sigma_M = kappa and sum sigma_i^2 = M N.
Vector geometric_singular_values(Index m, Index n, double kappa);

SvdSensingOperator build_operator(Index m, Index n, double kappa, RandomStream& rng);

inline Vector apply(const SvdSensingOperator& op, const Vector& x) { return op.apply(x); }
inline Vector apply_adjoint(const SvdSensingOperator& op, const Vector& y) { return op.apply_adjoint(y); }
Vector lmmse_resolvent_apply(const SvdSensingOperator& op, double gamma, const Vector& r);

/// Empirical eigenvalue law of the operator (uniform weights on lambda_i).
SpectralModel spectral_model_of(const SvdSensingOperator& op);

/// Geometric eigenvalue law with `atoms` equally weighted atoms, eigenvalue
/// ratio kappa^2 and unit mean; atoms == 0 means one atom per singular
/// value (atoms = m), which coincides with the spectrum of
/// build_operator(m, N, kappa).
SpectralModel limit_spectral_model(Index m, double kappa, Index atoms);

}  // namespace goamp
