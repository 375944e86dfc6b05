#include "goamp/core.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace goamp;

TEST_CASE("full support with the constant law") {
  RandomStream rng(1, 0);
  const auto s = make_sparse_signal(8, 8, NonzeroLaw::constant(1.0), rng);
  CHECK(s.support.size() == 8);
  for (Index i = 0; i < 8; ++i) CHECK(std::abs(s.values[i]) == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-15));
  CHECK(s.values.squaredNorm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("single nonzero is scaled by 1/sqrt(k)") {
  RandomStream rng(2, 0);
  const auto s = make_sparse_signal(4, 1, NonzeroLaw::constant(4.0), rng);
  int nonzero = 0;
  for (Index i = 0; i < 4; ++i) {
    if (s.values[i] != 0.0) {
      ++nonzero;
      CHECK(std::abs(s.values[i]) == doctest::Approx(2.0));
    }
  }
  CHECK(nonzero == 1);
}

TEST_CASE("signal energy concentrates at P for the gaussian law") {
  RandomStream rng(3, 0);
  const auto law = NonzeroLaw::gaussian(1.0);
  double acc = 0.0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) acc += make_sparse_signal(1 << 16, 16, law, rng).values.squaredNorm();
  const double mean = acc / draws;
  CHECK(mean >= 0.98);
  CHECK(mean <= 1.02);
}

TEST_CASE("support entries are exactly the nonzeros") {
  RandomStream rng(4, 0);
  const auto s = make_sparse_signal(1000, 37, NonzeroLaw::gaussian(2.0), rng);
  CHECK(s.power == 2.0);
  REQUIRE(s.support.size() == 37);
  for (std::size_t i = 1; i < s.support.size(); ++i) CHECK(s.support[i - 1] < s.support[i]);
  Index nnz = 0;
  for (Index i = 0; i < s.values.size(); ++i) nnz += s.values[i] != 0.0;
  CHECK(nnz == 37);
  for (Index i : s.support) CHECK(s.values[i] != 0.0);
}

TEST_CASE("support is a uniform subset") {
  RandomStream rng(5, 0);
  const int draws = 100000;
  const Index n = 16;
  const Index k = 2;
  std::vector<int> hits(n, 0);
  for (int d = 0; d < draws; ++d) {
    for (Index i : make_sparse_signal(n, k, NonzeroLaw::constant(1.0), rng).support) ++hits[i];
  }
  const double p = static_cast<double>(k) / n;
  const double mean = draws * p;
  const double sd = std::sqrt(draws * p * (1.0 - p));
  for (int h : hits) CHECK(std::abs(h - mean) <= 3.0 * sd);
}

TEST_CASE("invalid sparsity is rejected") {
  RandomStream rng(6, 0);
  CHECK_THROWS_AS(make_sparse_signal(4, 5, NonzeroLaw::gaussian(1.0), rng), InvalidArgument);
  CHECK_THROWS_AS(make_sparse_signal(4, 0, NonzeroLaw::gaussian(1.0), rng), InvalidArgument);
  CHECK_THROWS_AS(NonzeroLaw::gaussian(0.0), InvalidArgument);
}

TEST_CASE("nonzero law moments") {
  CHECK(NonzeroLaw::gaussian(1.5).power() == 1.5);
  CHECK(NonzeroLaw::gaussian(1.5).u_min() == 0.0);
  CHECK(NonzeroLaw::constant(4.0).power() == doctest::Approx(4.0));
  CHECK(NonzeroLaw::constant(4.0).u_min() == doctest::Approx(2.0));
  const auto tp = NonzeroLaw::two_point(1.0, 3.0, 0.25);
  CHECK(tp.power() == doctest::Approx(0.25 + 0.75 * 9.0));
  CHECK(tp.u_min() == 1.0);
}

TEST_CASE("noiseless channels") {
  RandomStream rng(7, 0);
  Vector z(2);
  z << 0.5, -2.0;
  const auto lin = measure(MeasurementChannel::linear(0.0), z, rng);
  CHECK(lin.y == z);
  const auto bit = measure(MeasurementChannel::one_bit(0.0), z, rng);
  CHECK(bit.y[0] == 1.0);
  CHECK(bit.y[1] == -1.0);
  CHECK(MeasurementChannel::one_bit(0.0).apply(0.0, 0.0) == 1.0);
}

TEST_CASE("linear channel noise energy") {
  RandomStream rng(8, 0);
  const Index m = 100000;
  const auto meas = measure(MeasurementChannel::linear(1.0), Vector::Zero(m), rng);
  const double e = meas.y.squaredNorm() / m;
  // chi-square with 1e5 degrees of freedom: sd of the mean is sqrt(2/1e5) ~ 0.0045
  CHECK(e >= 0.99);
  CHECK(e <= 1.01);
  CHECK(meas.w == meas.y);
}

TEST_CASE("measurement is reproducible from the seed") {
  Vector z = Vector::LinSpaced(64, -1.0, 1.0);
  RandomStream a(99, 3);
  RandomStream b(99, 3);
  const auto ma = measure(MeasurementChannel::one_bit(0.3), z, a);
  const auto mb = measure(MeasurementChannel::one_bit(0.3), z, b);
  CHECK(ma.y == mb.y);
  CHECK(ma.w == mb.w);
  RandomStream c(99, 4);
  CHECK(measure(MeasurementChannel::one_bit(0.3), z, c).w != ma.w);
}

TEST_CASE("delta uses the natural logarithm") {
  CHECK(delta_of(1 << 16, 16, 200) == doctest::Approx(1.5028).epsilon(0.0005 / 1.5028));
  CHECK(delta_of(1 << 16, 16, 2000) == doctest::Approx(15.028).epsilon(0.005 / 15.028));
  // n = e k exactly is not an integer; use the defining ratio directly.
  const double ratio = static_cast<double>(271828) / 100000.0;
  CHECK(100000.0 / (100000.0 * std::log(ratio)) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK_THROWS_AS(delta_of(16, 16, 10), InvalidArgument);
}

TEST_CASE("error metrics") {
  Vector x(3);
  x << 1.0, -2.0, 0.5;
  CHECK(unnormalized_sq_error(x, x) == 0.0);
  Vector e1 = Vector::Unit(2, 0);
  Vector e2 = Vector::Unit(2, 1);
  CHECK(unnormalized_sq_error(e1, e2) == 2.0);
  CHECK(unnormalized_sq_error(Vector::Zero(3), x) == doctest::Approx(x.squaredNorm()));
  CHECK(normalized_direction_error(3.0 * x, x) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(normalized_direction_error(-x, x) == doctest::Approx(4.0));
  CHECK(normalized_direction_error(e1, e2) == doctest::Approx(2.0));
  CHECK_THROWS_AS(normalized_direction_error(Vector::Zero(3), x), DegenerateInput);
  CHECK_THROWS_AS(unnormalized_sq_error(e1, x), InvalidArgument);
}

TEST_CASE("direction error is scale invariant") {
  RandomStream rng(10, 0);
  for (int trial = 0; trial < 50; ++trial) {
    Vector x(20), h(20);
    for (Index i = 0; i < 20; ++i) {
      x[i] = rng.normal();
      h[i] = rng.normal();
    }
    const double c = std::exp(4.0 * rng.normal());
    CHECK(std::abs(normalized_direction_error(c * h, x) - normalized_direction_error(h, x)) <= 1e-12);
  }
}
