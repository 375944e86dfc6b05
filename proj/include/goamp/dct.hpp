#pragma once

#include "goamp/types.hpp"

#include <complex>
#include <vector>

namespace goamp {

/// Orthonormal DCT-II of a fixed length and its inverse (DCT-III).
///
/// Lengths whose prime factors are all in {2, 3, 5} go through a single
/// real FFT of the same length (Makhoul's even/odd reordering), which is
/// O(n log n). Other lengths up to kMaxDenseSize fall back to an explicit
/// n x n cosine matrix. Instances are immutable; forward/inverse are safe
/// to call concurrently.
class OrthonormalDct {
 public:
  static constexpr Index kMaxDenseSize = 4096;

  explicit OrthonormalDct(Index n);

  static bool is_fast_size(Index n);
  static bool is_supported(Index n);

  Index size() const { return n_; }

  void forward(const Eigen::Ref<const Vector>& in, Eigen::Ref<Vector> out) const;
  void inverse(const Eigen::Ref<const Vector>& in, Eigen::Ref<Vector> out) const;

  Vector forward(const Vector& in) const;
  Vector inverse(const Vector& in) const;

  /// Explicit transform matrix (row k = k-th cosine basis vector).
  Matrix matrix() const;

 private:
  Index n_;
  bool fast_;
  std::vector<std::complex<double>> twiddle_;  // exp(-i pi k / 2n), k <= n/2
  Vector scale_;                               // sqrt(1/n), sqrt(2/n), ...
  Matrix dense_;                               // only for non-fast sizes
};

}  // namespace goamp
