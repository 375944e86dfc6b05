#include "goamp/sensing_operator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace goamp {

double SpectralModel::min_value() const { return *std::min_element(values.begin(), values.end()); }
double SpectralModel::max_value() const { return *std::max_element(values.begin(), values.end()); }

namespace {

void check_permutation(const std::vector<Index>& p, Index size, const char* name) {
  require(static_cast<Index>(p.size()) == size, std::string("SvdSensingOperator: wrong length for ") + name);
  std::vector<char> seen(static_cast<std::size_t>(size), 0);
  for (Index v : p) {
    require(v >= 0 && v < size && !seen[static_cast<std::size_t>(v)],
            std::string("SvdSensingOperator: ") + name + " is not a permutation");
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

std::vector<Index> random_permutation(Index size, RandomStream& rng) {
  std::vector<Index> p(static_cast<std::size_t>(size));
  std::iota(p.begin(), p.end(), Index{0});
  for (Index i = size - 1; i > 0; --i) {
    const auto j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(i + 1)));
    std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
  }
  return p;
}

}  // namespace

SvdSensingOperator::SvdSensingOperator(Index m, Index n, Vector singular_values, std::vector<Index> perm1,
                                       std::vector<Index> perm2)
    : m_(m),
      n_(n),
      sigma_(std::move(singular_values)),
      perm1_(std::move(perm1)),
      perm2_(std::move(perm2)),
      dct_m_(m),
      dct_n_(n) {
  require(m >= 1 && m <= n, "SvdSensingOperator: need 1 <= m <= n");
  require(sigma_.size() == m, "SvdSensingOperator: need m singular values");
  require((sigma_.array() > 0.0).all(), "SvdSensingOperator: singular values must be positive");
  check_permutation(perm1_, m, "perm1");
  check_permutation(perm2_, n, "perm2");
  lambda_ = sigma_.array().square() / static_cast<double>(n);
}

Vector SvdSensingOperator::apply(const Vector& x) const {
  require(x.size() == n_, "apply: expected a length-N vector");
  const Vector a = dct_n_.forward(x);
  Vector d(m_);
  for (Index i = 0; i < m_; ++i) d[perm1_[static_cast<std::size_t>(i)]] = sigma_[i] * a[perm2_[static_cast<std::size_t>(i)]];
  return dct_m_.forward(d);
}

Vector SvdSensingOperator::apply_adjoint(const Vector& y) const {
  require(y.size() == m_, "apply_adjoint: expected a length-M vector");
  const Vector e = dct_m_.inverse(y);
  Vector b = Vector::Zero(n_);
  for (Index i = 0; i < m_; ++i) b[perm2_[static_cast<std::size_t>(i)]] = sigma_[i] * e[perm1_[static_cast<std::size_t>(i)]];
  return dct_n_.inverse(b);
}

Vector SvdSensingOperator::left_basis_adjoint(const Vector& y) const {
  const Vector e = dct_m_.inverse(y);
  Vector c(m_);
  for (Index i = 0; i < m_; ++i) c[i] = e[perm1_[static_cast<std::size_t>(i)]];
  return c;
}

Vector SvdSensingOperator::left_basis_apply(const Vector& c) const {
  Vector d(m_);
  for (Index i = 0; i < m_; ++i) d[perm1_[static_cast<std::size_t>(i)]] = c[i];
  return dct_m_.forward(d);
}

Vector SvdSensingOperator::resolvent_apply(double gamma, const Vector& r) const {
  require(gamma > 0.0, "lmmse_resolvent_apply: gamma must be positive");
  require(r.size() == m_, "lmmse_resolvent_apply: expected a length-M vector");
  Vector c = left_basis_adjoint(r);
  c.array() /= gamma + sigma_.array().square();
  return left_basis_apply(c);
}

Vector SvdSensingOperator::column(Index j) const {
  require(j >= 0 && j < n_, "column: index out of range");
  // A e_j = U_dct P1 Sigma P2 v_j, where v_j is column j of the N-point DCT.
  const double nd = static_cast<double>(n_);
  Vector d(m_);
  for (Index i = 0; i < m_; ++i) {
    const Index k = perm2_[static_cast<std::size_t>(i)];
    const double s = (k == 0) ? std::sqrt(1.0 / nd) : std::sqrt(2.0 / nd);
    const double v = s * std::cos(std::numbers::pi * static_cast<double>((2 * j + 1) * k) / (2.0 * nd));
    d[perm1_[static_cast<std::size_t>(i)]] = sigma_[i] * v;
  }
  return dct_m_.forward(d);
}

Matrix SvdSensingOperator::dense() const {
  Matrix a(m_, n_);
  for (Index j = 0; j < n_; ++j) a.col(j) = column(j);
  return a;
}

Vector geometric_singular_values(Index m, Index n, double kappa) {
  require(m >= 1 && m <= n, "geometric_singular_values: need 1 <= m <= n");
  require(kappa >= 1.0, "geometric_singular_values: kappa must be at least 1");
  Vector s(m);
  if (m == 1 || kappa == 1.0) {
    s.setOnes();
  } else {
    // log-linear from 0 down to -log(kappa) so that s_1 / s_M == kappa up to rounding
    const double log_k = std::log(kappa);
    for (Index i = 0; i < m; ++i) s[i] = std::exp(-log_k * static_cast<double>(i) / static_cast<double>(m - 1));
  }
  const double target = static_cast<double>(m) * static_cast<double>(n);
  s *= std::sqrt(target / s.squaredNorm());
  return s;
}

SvdSensingOperator build_operator(Index m, Index n, double kappa, RandomStream& rng) {
  require(OrthonormalDct::is_supported(m) && OrthonormalDct::is_supported(n),
          "build_operator: unsupported transform size");
  Vector sigma = geometric_singular_values(m, n, kappa);
  auto p1 = random_permutation(m, rng);
  auto p2 = random_permutation(n, rng);
  return {m, n, std::move(sigma), std::move(p1), std::move(p2)};
}

Vector lmmse_resolvent_apply(const SvdSensingOperator& op, double gamma, const Vector& r) {
  return op.resolvent_apply(gamma, r);
}

namespace {

SpectralModel uniform_atoms(std::vector<double> values) {
  SpectralModel sm;
  const double w = 1.0 / static_cast<double>(values.size());
  // Enforce unit mean exactly against accumulated rounding.
  double mean = 0.0;
  for (double v : values) mean += w * v;
  for (double& v : values) v /= mean;
  sm.weights.assign(values.size(), w);
  sm.values = std::move(values);
  return sm;
}

}  // namespace

SpectralModel spectral_model_of(const SvdSensingOperator& op) {
  const Vector& l = op.eigenvalues();
  return uniform_atoms(std::vector<double>(l.data(), l.data() + l.size()));
}

SpectralModel limit_spectral_model(Index m, double kappa, Index atoms) {
  require(m >= 1 && atoms >= 0, "limit_spectral_model: need m >= 1 and atoms >= 0");
  require(kappa >= 1.0, "limit_spectral_model: kappa must be at least 1");
  if (atoms == 0) atoms = m;
  if (kappa == 1.0 || atoms == 1) return uniform_atoms({1.0});
  const Vector s = geometric_singular_values(atoms, atoms, kappa);
  std::vector<double> values(static_cast<std::size_t>(atoms));
  for (Index i = 0; i < atoms; ++i) values[static_cast<std::size_t>(i)] = s[i] * s[i];
  return uniform_atoms(std::move(values));
}

}  // namespace goamp
