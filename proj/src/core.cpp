#include "goamp/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace goamp {

NonzeroLaw NonzeroLaw::gaussian(double power) {
  require(power > 0.0, "NonzeroLaw: power must be positive");
  return {Kind::Gaussian, power, 0.0, 1.0};
}

NonzeroLaw NonzeroLaw::constant(double power) {
  require(power > 0.0, "NonzeroLaw: power must be positive");
  return {Kind::Constant, std::sqrt(power), 0.0, 1.0};
}

NonzeroLaw NonzeroLaw::two_point(double a, double b, double p) {
  require(a > 0.0 && b > 0.0, "NonzeroLaw: two-point amplitudes must be positive");
  require(p >= 0.0 && p <= 1.0, "NonzeroLaw: two-point probability must lie in [0, 1]");
  return {Kind::TwoPoint, a, b, p};
}

double NonzeroLaw::power() const {
  switch (kind_) {
    case Kind::Gaussian: return a_;
    case Kind::Constant: return a_ * a_;
    case Kind::TwoPoint: return p_ * a_ * a_ + (1.0 - p_) * b_ * b_;
  }
  return 0.0;
}

double NonzeroLaw::u_min() const {
  switch (kind_) {
    case Kind::Gaussian: return 0.0;
    case Kind::Constant: return a_;
    case Kind::TwoPoint:
      if (p_ == 0.0) return b_;
      if (p_ == 1.0) return a_;
      return std::min(a_, b_);
  }
  return 0.0;
}

double NonzeroLaw::sample(RandomStream& rng) const {
  switch (kind_) {
    case Kind::Gaussian: return std::sqrt(a_) * rng.normal();
    case Kind::Constant: return rng.uniform() < 0.5 ? -a_ : a_;
    case Kind::TwoPoint: {
      const double mag = rng.uniform() < p_ ? a_ : b_;
      return rng.uniform() < 0.5 ? -mag : mag;
    }
  }
  return 0.0;
}

SparseSignal make_sparse_signal(Index n, Index k, const NonzeroLaw& law, RandomStream& rng) {
  require(k >= 1, "make_sparse_signal: k must be at least 1");
  require(k <= n, "make_sparse_signal: k must not exceed n");

  // Partial Fisher-Yates: the first k slots are a uniform k-subset.
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i < k; ++i) {
    const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }

  SparseSignal s;
  s.n = n;
  s.k = k;
  s.power = law.power();
  s.support.assign(pool.begin(), pool.begin() + k);
  s.values = Vector::Zero(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));
  for (Index idx : s.support) {
    double u = law.sample(rng);
    // U has no mass at the origin; redraw the measure-zero event.
    while (u == 0.0) u = law.sample(rng);
    s.values[idx] = u * scale;
  }
  std::sort(s.support.begin(), s.support.end());
  return s;
}

MeasurementChannel MeasurementChannel::linear(double noise_var) {
  require(noise_var >= 0.0, "MeasurementChannel: noise variance must be non-negative");
  return {Kind::Linear, noise_var};
}

MeasurementChannel MeasurementChannel::one_bit(double noise_var) {
  require(noise_var >= 0.0, "MeasurementChannel: noise variance must be non-negative");
  return {Kind::OneBitSign, noise_var};
}

double MeasurementChannel::apply(double z, double w) const {
  if (kind_ == Kind::Linear) return z + w;
  return (z + w) >= 0.0 ? 1.0 : -1.0;
}

Measurement measure(const MeasurementChannel& channel, const Vector& z, RandomStream& rng) {
  Measurement out;
  out.w.resize(z.size());
  out.y.resize(z.size());
  const double sigma = std::sqrt(channel.noise_var());
  for (Index i = 0; i < z.size(); ++i) {
    out.w[i] = sigma * rng.normal();
    out.y[i] = channel.apply(z[i], out.w[i]);
  }
  return out;
}

double delta_of(Index n, Index k, Index m) {
  require(k >= 1 && m >= 1, "delta_of: k and m must be positive");
  require(n > k, "delta_of: n must exceed k (log(n/k) = 0)");
  return static_cast<double>(m) /
         (static_cast<double>(k) * std::log(static_cast<double>(n) / static_cast<double>(k)));
}

double unnormalized_sq_error(const Vector& x_hat, const Vector& x) {
  require(x_hat.size() == x.size(), "unnormalized_sq_error: length mismatch");
  return (x_hat - x).squaredNorm();
}

double normalized_direction_error(const Vector& x_hat, const Vector& x) {
  require(x_hat.size() == x.size(), "normalized_direction_error: length mismatch");
  const double nx = x.norm();
  const double nh = x_hat.norm();
  if (!(nx > 0.0) || !(nh > 0.0)) throw DegenerateInput("normalized_direction_error: zero-norm input");
  const double cosine = std::clamp(x.dot(x_hat) / (nx * nh), -1.0, 1.0);
  return 2.0 - 2.0 * cosine;
}

}  // namespace goamp
