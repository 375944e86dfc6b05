#include "goamp/state_evolution.hpp"

#include "goamp/gaussian.hpp"
#include "goamp/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace goamp {

double se_xi_a_z(double v_x, double v_z, const SpectralModel& spectrum) {
  require(v_x >= 0.0 && v_z >= 0.0, "se_xi_a_z: variances must be non-negative");
  require(v_x > 0.0 || v_z > 0.0, "se_xi_a_z: v_x and v_z are both zero");
  return spectrum.expect([&](double l) { return v_x * l / (v_z + v_x * l); });
}

double se_inner_map_phi(double x, const NonzeroLaw& law) {
  require(x >= 0.0, "se_inner_map_phi: x must be non-negative");
  const double p = law.power();
  switch (law.kind()) {
    case NonzeroLaw::Kind::Gaussian:
      return std::isinf(x) ? p : p * chi2_cdf_3dof(x / p);
    case NonzeroLaw::Kind::Constant:
      return p < x ? p : 0.0;
    case NonzeroLaw::Kind::TwoPoint: {
      const double a2 = law.a() * law.a();
      const double b2 = law.b() * law.b();
      return (a2 < x ? law.p() * a2 : 0.0) + (b2 < x ? (1.0 - law.p()) * b2 : 0.0);
    }
  }
  return 0.0;
}

double se_chart_module_a(double v_B2A, double sigma2, const SpectralModel& spectrum) {
  require(v_B2A >= 0.0 && sigma2 >= 0.0, "se_chart_module_a: negative variance");
  require(sigma2 > 0.0 || v_B2A > 0.0, "se_chart_module_a: sigma2 and v are both zero");
  return 1.0 / spectrum.expect([&](double l) { return l / (sigma2 + v_B2A * l); });
}

double se_linear_psi(double y, double delta, double sigma2, const SpectralModel& spectrum) {
  require(delta > 0.0, "se_linear_psi: delta must be positive");
  return 2.0 / delta * se_chart_module_a(y, sigma2, spectrum);
}

SeOuterStep se_outer_step_bayes(double v, const MeasurementChannel& channel, double power, int order) {
  require(v > 0.0, "se_outer_step_bayes: v must be positive");
  require(v <= power * (1.0 + 1e-12), "se_outer_step_bayes: v exceeds P");
  v = std::min(v, power);
  const double s2 = channel.noise_var();
  if (channel.is_linear()) {
    return {s2 / (s2 + v), s2};
  }
  const double tau2 = v + s2;
  const double s = std::sqrt((power - v) / tau2);
  const auto& rule = gauss_hermite(order);
  // E[pdf(Z) (R(Z) + R(-Z))] for Z ~ N(0, s^2); the quadrature is taken
  // over whichever Gaussian factor is narrower.
  double eg = 0.0;
  if (s <= 1.0) {
    eg = gaussian_expectation(rule, [&](double g) {
      const double zeta = s * g;
      return normal_pdf(zeta) * (mills_ratio(zeta) + mills_ratio(-zeta));
    });
  } else {
    eg = gaussian_expectation(rule, [&](double g) {
      return (mills_ratio(g) + mills_ratio(-g)) * normal_pdf(g / s) / s;
    });
  }
  const double xi = std::clamp(1.0 - v / tau2 * eg, 0.0, 1.0);
  if (!(xi < 1.0)) throw IllConditioned("se_outer_step_bayes: divergence reached 1");
  return {xi, xi * v / (1.0 - xi)};
}

namespace {

void require_config(const SeConfig& c) {
  require(c.delta > 0.0, "SE: delta must be positive");
  require(!c.spectrum.values.empty(), "SE: empty spectrum");
  require(c.quadrature_order >= 20, "SE: quadrature order must be at least 20");
  require(c.max_iterations >= 1, "SE: max_iterations must be positive");
}

template <class Step>
SeTrajectory iterate(const SeConfig& c, SeState s, Step&& step) {
  const double p = c.law.power();
  SeTrajectory traj;
  traj.states.push_back(s);
  for (int t = 0; t < c.max_iterations; ++t) {
    SeState next = step(s);
    next.t = t + 1;
    traj.states.push_back(next);
    const bool done = std::abs(next.v_x_B2A - s.v_x_B2A) < c.tolerance * p;
    s = next;
    if (done) {
      traj.converged = true;
      break;
    }
  }
  return traj;
}

}  // namespace

SeTrajectory run_se_bayes(const SeConfig& c) {
  require_config(c);
  const double p = c.law.power();
  SeState init;
  init.v_x_B2A = p;
  init.v_z_A2B = p;
  init.v_x_A2B = p;
  init.v_z_B2A = se_outer_step_bayes(p, c.channel, p, c.quadrature_order).v_next;
  return iterate(c, init, [&](const SeState& s) {
    SeState n;
    const double vx = s.v_x_B2A;
    const double vz = s.v_z_B2A;
    if (vx <= 0.0 && vz <= 0.0) {
      n.v_z_B2A = vz;
      return n;
    }
    // v_x / xi and xi v_z / (1 - xi), written without the cancellations.
    const double e_l = c.spectrum.expect([&](double l) { return l / (vz + vx * l); });
    const double e_1 = c.spectrum.expect([&](double l) { return 1.0 / (vz + vx * l); });
    n.v_x_A2B = 1.0 / e_l;
    n.v_z_A2B = std::min(vx * e_l / e_1, p);
    n.v_x_B2A = se_inner_map_phi(2.0 * n.v_x_A2B / c.delta, c.law);
    n.v_z_B2A = n.v_z_A2B > 0.0 ? se_outer_step_bayes(n.v_z_A2B, c.channel, p, c.quadrature_order).v_next : vz;
    return n;
  });
}

SeTrajectory run_se_linear(const SeConfig& c) {
  require_config(c);
  require(c.channel.is_linear(), "run_se_linear: linear channel required");
  const double p = c.law.power();
  const double s2 = c.channel.noise_var();
  SeState init;
  init.v_x_B2A = p;
  init.v_x_A2B = p;
  init.v_z_A2B = p;
  init.v_z_B2A = s2;
  return iterate(c, init, [&](const SeState& s) {
    SeState n;
    n.v_z_B2A = s2;
    if (s.v_x_B2A <= 0.0 && s2 <= 0.0) return n;
    n.v_x_A2B = se_chart_module_a(s.v_x_B2A, s2, c.spectrum);
    n.v_x_B2A = se_inner_map_phi(2.0 * n.v_x_A2B / c.delta, c.law);
    const double e_1 = c.spectrum.expect([&](double l) { return 1.0 / (s2 + s.v_x_B2A * l); });
    n.v_z_A2B = std::min(s.v_x_B2A / (n.v_x_A2B * e_1), p);
    return n;
  });
}

double reconstruction_threshold(const SpectralModel& spectrum, double sigma2, double u_min) {
  if (!(u_min > 0.0)) throw InvalidArgument("reconstruction_threshold: undefined for u_min = 0");
  require(sigma2 >= 0.0, "reconstruction_threshold: sigma2 must be non-negative");
  const double u2 = u_min * u_min;
  return 2.0 / spectrum.expect([&](double l) { return u2 * l / (sigma2 + u2 * l); });
}

double se_metric_normalized(double v_bar, double power) {
  require(v_bar >= 0.0 && v_bar <= power, "se_metric_normalized: need 0 <= v <= P");
  return 2.0 - 2.0 * std::sqrt((power - v_bar) / power);
}

int count_crossings(const std::vector<double>& v, const std::vector<double>& mapped) {
  require(v.size() == mapped.size(), "count_crossings: length mismatch");
  int count = 0;
  int prev = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double h = mapped[i] - v[i];
    const int sign = h > 0.0 ? 1 : (h < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (prev != 0 && sign != prev) ++count;
    prev = sign;
  }
  return count;
}

SeChart se_chart(const SeConfig& c, double v_min, int points) {
  require_config(c);
  require(c.channel.is_linear(), "se_chart: linear channel required");
  require(points >= 2 && v_min > 0.0, "se_chart: need at least two grid points and v_min > 0");
  const double p = c.law.power();
  const double s2 = c.channel.noise_var();
  SeChart chart;
  const double lo = std::log(v_min);
  const double hi = std::log(p);
  for (int i = 0; i < points; ++i) {
    const double v = std::exp(lo + (hi - lo) * i / (points - 1));
    const double a = se_chart_module_a(v, s2, c.spectrum);
    chart.v_B2A.push_back(v);
    chart.module_a.push_back(a);
    chart.module_b.push_back(se_inner_map_phi(2.0 * a / c.delta, c.law));
  }
  chart.crossings = count_crossings(chart.v_B2A, chart.module_b);
  chart.trajectory = run_se_linear(c).states;
  return chart;
}

}  // namespace goamp
