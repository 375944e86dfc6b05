#pragma once

namespace goamp {

double normal_pdf(double x);
double normal_cdf(double x);
double log_normal_pdf(double x, double var);

/// Inverse Mills ratio pdf(z) / cdf(z), accurate for all finite z.
/// Uses the asymptotic tail series below z = -30 where cdf underflows.
double mills_ratio(double z);

/// Regularized lower incomplete gamma P(3/2, x/2): the chi-square CDF
/// with three degrees of freedom.
double chi2_cdf_3dof(double x);

}  // namespace goamp
