#include "goamp/gaussian.hpp"

#include <cmath>
#include <numbers>

namespace goamp {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;
constexpr double kMillsSwitch = -30.0;
}  // namespace

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double log_normal_pdf(double x, double var) {
  return -0.5 * std::log(2.0 * std::numbers::pi * var) - 0.5 * x * x / var;
}

double mills_ratio(double z) {
  if (z >= kMillsSwitch) return normal_pdf(z) / normal_cdf(z);
  // cdf(z) = pdf(z)/t * (1 - 1/t^2 + 3/t^4 - 15/t^6 + 105/t^8 - ...), t = -z
  const double t = -z;
  const double u = 1.0 / (t * t);
  const double series = 1.0 - u * (1.0 - 3.0 * u * (1.0 - 5.0 * u * (1.0 - 7.0 * u)));
  return t / series;
}

double chi2_cdf_3dof(double x) {
  if (x <= 0.0) return 0.0;
  if (x < 2.0) {
    // Series for P(a, z), a = 3/2, z = x/2; avoids the erf cancellation near 0.
    const double z = 0.5 * x;
    double term = 1.0;
    double sum = 1.0;
    for (int n = 1; n < 60 && term > 1e-17 * sum; ++n) {
      term *= z / (1.5 + n);
      sum += term;
    }
    const double gamma_5_2 = 0.75 * std::sqrt(std::numbers::pi);
    return std::pow(z, 1.5) * std::exp(-z) / gamma_5_2 * sum;
  }
  const double r = std::sqrt(x);
  return std::erf(r / std::numbers::sqrt2) - std::sqrt(2.0 / std::numbers::pi) * r * std::exp(-0.5 * x);
}

}  // namespace goamp
