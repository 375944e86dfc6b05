#include "goamp/dct.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>

namespace goamp {
namespace {

Eigen::FFT<double>& thread_fft() {
  // kissfft keeps mutable plan caches and scratch buffers.
  thread_local Eigen::FFT<double> fft = [] {
    Eigen::FFT<double> f;
    f.SetFlag(Eigen::FFT<double>::HalfSpectrum);
    return f;
  }();
  return fft;
}

struct Scratch {
  std::vector<double> real;
  std::vector<std::complex<double>> spectrum;
};

Scratch& thread_scratch() {
  thread_local Scratch s;
  return s;
}

}  // namespace

bool OrthonormalDct::is_fast_size(Index n) {
  if (n < 2) return false;
  for (Index p : {2, 3, 5})
    while (n % p == 0) n /= p;
  return n == 1;
}

bool OrthonormalDct::is_supported(Index n) { return is_fast_size(n) || (n >= 1 && n <= kMaxDenseSize); }

OrthonormalDct::OrthonormalDct(Index n) : n_(n), fast_(is_fast_size(n)) {
  require(is_supported(n), "OrthonormalDct: unsupported length " + std::to_string(n));
  const double nd = static_cast<double>(n);
  scale_ = Vector::Constant(n, std::sqrt(2.0 / nd));
  scale_[0] = std::sqrt(1.0 / nd);
  if (fast_) {
    twiddle_.resize(static_cast<std::size_t>(n / 2 + 1));
    for (Index k = 0; k <= n / 2; ++k) {
      const double ang = -std::numbers::pi * static_cast<double>(k) / (2.0 * nd);
      twiddle_[static_cast<std::size_t>(k)] = {std::cos(ang), std::sin(ang)};
    }
  } else {
    dense_ = matrix();
  }
}

Matrix OrthonormalDct::matrix() const {
  const double nd = static_cast<double>(n_);
  Matrix c(n_, n_);
  for (Index k = 0; k < n_; ++k)
    for (Index j = 0; j < n_; ++j)
      c(k, j) = scale_[k] * std::cos(std::numbers::pi * static_cast<double>((2 * j + 1) * k) / (2.0 * nd));
  return c;
}

void OrthonormalDct::forward(const Eigen::Ref<const Vector>& in, Eigen::Ref<Vector> out) const {
  require(in.size() == n_ && out.size() == n_, "OrthonormalDct::forward: length mismatch");
  if (!fast_) {
    out.noalias() = dense_ * in;
    return;
  }
  auto& s = thread_scratch();
  s.real.resize(static_cast<std::size_t>(n_));
  const Index half = (n_ + 1) / 2;
  for (Index m = 0; m < half; ++m) s.real[static_cast<std::size_t>(m)] = in[2 * m];
  for (Index m = 0; m < n_ / 2; ++m) s.real[static_cast<std::size_t>(n_ - 1 - m)] = in[2 * m + 1];

  thread_fft().fwd(s.spectrum, s.real);

  for (Index k = 0; k <= n_ / 2; ++k) {
    const auto v = s.spectrum[static_cast<std::size_t>(k)];
    const auto t = twiddle_[static_cast<std::size_t>(k)];
    out[k] = scale_[k] * (t * v).real();
    if (k > 0 && n_ - k > n_ / 2) {
      // V[n-k] = conj(V[k]) and exp(-i pi (n-k)/2n) = -i conj(t).
      out[n_ - k] = scale_[n_ - k] * (std::complex<double>(0.0, -1.0) * std::conj(t) * std::conj(v)).real();
    }
  }
}

void OrthonormalDct::inverse(const Eigen::Ref<const Vector>& in, Eigen::Ref<Vector> out) const {
  require(in.size() == n_ && out.size() == n_, "OrthonormalDct::inverse: length mismatch");
  if (!fast_) {
    out.noalias() = dense_.transpose() * in;
    return;
  }
  auto& s = thread_scratch();
  s.spectrum.resize(static_cast<std::size_t>(n_ / 2 + 1));
  for (Index k = 0; k <= n_ / 2; ++k) {
    const double ck = in[k] / scale_[k];
    const double cnk = (k == 0) ? 0.0 : in[n_ - k] / scale_[n_ - k];
    // V[k] = exp(+i pi k/2n) (c_k - i c_{n-k})
    s.spectrum[static_cast<std::size_t>(k)] =
        std::conj(twiddle_[static_cast<std::size_t>(k)]) * std::complex<double>(ck, -cnk);
  }
  thread_fft().inv(s.real, s.spectrum, n_);

  const Index half = (n_ + 1) / 2;
  for (Index m = 0; m < half; ++m) out[2 * m] = s.real[static_cast<std::size_t>(m)];
  for (Index m = 0; m < n_ / 2; ++m) out[2 * m + 1] = s.real[static_cast<std::size_t>(n_ - 1 - m)];
}

Vector OrthonormalDct::forward(const Vector& in) const {
  Vector out(n_);
  forward(in, out);
  return out;
}

Vector OrthonormalDct::inverse(const Vector& in) const {
  Vector out(n_);
  inverse(in, out);
  return out;
}

}  // namespace goamp
