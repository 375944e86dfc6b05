#pragma once

#include "goamp/core.hpp"
#include "goamp/types.hpp"

namespace goamp {

/// Bernoulli-Gaussian marginal of one signal entry: zero with probability
/// 1 - rho, N(0, slab_var) otherwise.
struct InnerPrior {
  double rho = 1.0;
  double slab_var = 1.0;

  /// rho = k/N, slab_var = P/k.
  static InnerPrior from_sparsity(Index n, Index k, double power);
};

struct ScalarPosterior {
  double mean = 0.0;
  double second_moment = 0.0;

  double variance() const { return second_moment - mean * mean; }
};

/// Posterior of x given y = x + N(0, v) under the spike-slab prior,
/// evaluated in log space.
ScalarPosterior bg_posterior(double y, double v, const InnerPrior& prior);

/// Sum of posterior variances over all entries of x_t.
double bg_posterior_variance_sum(const Vector& x_t, double v, const InnerPrior& prior);

struct InnerDenoised {
  Vector mean;
  double variance_sum = 0.0;
};

/// Vectorized bg_posterior: posterior means and the summed variance.
InnerDenoised bg_denoise(const Vector& x_t, double v, const InnerPrior& prior);

/// xi = v_B / v_{A->B}.
double bg_divergence_xi(double v_B, double v_A2B);

struct OuterPosterior {
  double mean = 0.0;
  double variance = 0.0;
};

/// Posterior of Z given the observation y and the prior Z ~ N(z_t, v).
OuterPosterior outer_posterior(const MeasurementChannel& channel, double z_t, double y, double v);

struct OuterDenoised {
  Vector mean;
  double xi = 0.0;  // (1/M) sum_m Var(Z | y_m, z_t,m) / v
};

OuterDenoised outer_denoise(const MeasurementChannel& channel, const Vector& z_t, const Vector& y, double v);

/// Divergence (1/M) sum_m d mean_m / d z_t,m = average posterior variance / v.
double outer_divergence_xi(const MeasurementChannel& channel, const Vector& z_t, const Vector& y, double v);

}  // namespace goamp
