#include "goamp/denoisers.hpp"

#include "goamp/gaussian.hpp"

#include <algorithm>
#include <cmath>

namespace goamp {

InnerPrior InnerPrior::from_sparsity(Index n, Index k, double power) {
  require(n >= 1 && k >= 1 && k <= n, "InnerPrior: need 1 <= k <= n");
  require(power > 0.0, "InnerPrior: power must be positive");
  return {static_cast<double>(k) / static_cast<double>(n), power / static_cast<double>(k)};
}

ScalarPosterior bg_posterior(double y, double v, const InnerPrior& prior) {
  require(v > 0.0, "bg_posterior: noise variance must be positive");
  const double s = prior.slab_var;
  const double shrink = s / (s + v);
  const double slab_mean = shrink * y;
  const double slab_var = shrink * v;
  if (prior.rho >= 1.0) return {slab_mean, slab_var + slab_mean * slab_mean};

  // pi = 1 / (1 + exp(l0 - l1)) with l1, l0 the log-weights of slab and spike.
  const double l1 = std::log(prior.rho) + log_normal_pdf(y, s + v);
  const double l0 = std::log1p(-prior.rho) + log_normal_pdf(y, v);
  const double d = l0 - l1;
  const double pi = d > 0.0 ? std::exp(-d) / (1.0 + std::exp(-d)) : 1.0 / (1.0 + std::exp(d));
  return {pi * slab_mean, pi * (slab_var + slab_mean * slab_mean)};
}

InnerDenoised bg_denoise(const Vector& x_t, double v, const InnerPrior& prior) {
  InnerDenoised out;
  out.mean.resize(x_t.size());
  double sum = 0.0;
  for (Index i = 0; i < x_t.size(); ++i) {
    const auto p = bg_posterior(x_t[i], v, prior);
    out.mean[i] = p.mean;
    sum += std::max(p.variance(), 0.0);
  }
  out.variance_sum = sum;
  return out;
}

double bg_posterior_variance_sum(const Vector& x_t, double v, const InnerPrior& prior) {
  return bg_denoise(x_t, v, prior).variance_sum;
}

double bg_divergence_xi(double v_B, double v_A2B) {
  require(v_A2B > 0.0, "bg_divergence_xi: v_A2B must be positive");
  return v_B / v_A2B;
}

OuterPosterior outer_posterior(const MeasurementChannel& channel, double z_t, double y, double v) {
  require(v > 0.0, "outer_posterior: prior variance must be positive");
  const double s2 = channel.noise_var();
  if (channel.is_linear()) {
    return {(s2 * z_t + v * y) / (s2 + v), s2 * v / (s2 + v)};
  }
  require(y == 1.0 || y == -1.0, "outer_posterior: one-bit observation must be +1 or -1");
  const double tau2 = v + s2;
  const double tau = std::sqrt(tau2);
  const double zeta = y * z_t / tau;
  const double r = mills_ratio(zeta);
  const double mean = z_t + y * (v / tau) * r;
  const double var = v - (v * v / tau2) * r * (r + zeta);
  return {mean, std::clamp(var, 0.0, v)};
}

OuterDenoised outer_denoise(const MeasurementChannel& channel, const Vector& z_t, const Vector& y, double v) {
  require(z_t.size() == y.size(), "outer_denoise: length mismatch");
  OuterDenoised out;
  out.mean.resize(z_t.size());
  double acc = 0.0;
  for (Index i = 0; i < z_t.size(); ++i) {
    const auto p = outer_posterior(channel, z_t[i], y[i], v);
    out.mean[i] = p.mean;
    acc += p.variance;
  }
  out.xi = z_t.size() > 0 ? acc / (static_cast<double>(z_t.size()) * v) : 0.0;
  return out;
}

double outer_divergence_xi(const MeasurementChannel& channel, const Vector& z_t, const Vector& y, double v) {
  return outer_denoise(channel, z_t, y, v).xi;
}

}  // namespace goamp
