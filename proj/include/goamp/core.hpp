#pragma once

#include "goamp/random.hpp"
#include "goamp/types.hpp"

#include <vector>

namespace goamp {

/// Law of the scaled nonzero amplitudes U (x_i = u_i / sqrt(k) on the support).
class NonzeroLaw {
 public:
  enum class Kind { Gaussian, Constant, TwoPoint };

  /// U ~ N(0, P).
  static NonzeroLaw gaussian(double power);
  /// U = +-sqrt(P) with a fair random sign.
  static NonzeroLaw constant(double power);
  /// |U| = a with probability p, |U| = b otherwise; fair random sign.
  static NonzeroLaw two_point(double a, double b, double p);

  Kind kind() const { return kind_; }
  double power() const;
  /// Essential minimum of |U|.
  double u_min() const;
  double sample(RandomStream& rng) const;

  double a() const { return a_; }
  double b() const { return b_; }
  double p() const { return p_; }

 private:
  NonzeroLaw(Kind kind, double a, double b, double p) : kind_(kind), a_(a), b_(b), p_(p) {}

  Kind kind_;
  double a_;  // Gaussian: power; Constant: amplitude; TwoPoint: first amplitude
  double b_;
  double p_;
};

struct SparseSignal {
  Index n = 0;
  Index k = 0;
  std::vector<Index> support;  // sorted ascending
  Vector values;
  double power = 0.0;  // analytic E[||x||^2] = P
};

SparseSignal make_sparse_signal(Index n, Index k, const NonzeroLaw& law, RandomStream& rng);

class MeasurementChannel {
 public:
  enum class Kind { Linear, OneBitSign };

  static MeasurementChannel linear(double noise_var);
  static MeasurementChannel one_bit(double noise_var);

  Kind kind() const { return kind_; }
  double noise_var() const { return noise_var_; }
  bool is_linear() const { return kind_ == Kind::Linear; }

  /// g(z, w). sgn(0) is +1.
  double apply(double z, double w) const;

 private:
  MeasurementChannel(Kind kind, double noise_var) : kind_(kind), noise_var_(noise_var) {}

  Kind kind_;
  double noise_var_;
};

struct Measurement {
  Vector y;
  Vector w;
};

Measurement measure(const MeasurementChannel& channel, const Vector& z, RandomStream& rng);

/// M / (k ln(N/k)).
double delta_of(Index n, Index k, Index m);

double unnormalized_sq_error(const Vector& x_hat, const Vector& x);

/// || x/||x|| - x_hat/||x_hat|| ||^2, computed as 2 - 2 cos(angle).
double normalized_direction_error(const Vector& x_hat, const Vector& x);

}  // namespace goamp
