#pragma once

#include "goamp/core.hpp"
#include "goamp/sensing_operator.hpp"

#include <vector>

namespace goamp {

struct SeState {
  double v_x_B2A = 0.0;
  double v_z_B2A = 0.0;
  double v_x_A2B = 0.0;
  double v_z_A2B = 0.0;
  int t = 0;
};

struct SeConfig {
  double delta = 1.0;
  SpectralModel spectrum;
  MeasurementChannel channel = MeasurementChannel::linear(0.0);
  NonzeroLaw law = NonzeroLaw::gaussian(1.0);
  int quadrature_order = 61;
  int max_iterations = 10000;
  /// Stop when |v_x_B2A(t+1) - v_x_B2A(t)| < tolerance * P.
  double tolerance = 1e-14;
};

struct SeTrajectory {
  std::vector<SeState> states;  // states[0] is the initialization
  bool converged = false;

  double final_v() const { return states.back().v_x_B2A; }
};

/// E[v_x L / (v_z + v_x L)].
double se_xi_a_z(double v_x, double v_z, const SpectralModel& spectrum);

/// phi(x) = E[U^2 1(U^2 < x)].
double se_inner_map_phi(double x, const NonzeroLaw& law);

/// (2/delta) / E[L / (sigma2 + y L)].
double se_linear_psi(double y, double delta, double sigma2, const SpectralModel& spectrum);

struct SeOuterStep {
  double xi_bar = 0.0;
  double v_next = 0.0;
};

/// Bayes-optimal outer update for prior variance v of Z given Z_t ~ N(0, P - v).
SeOuterStep se_outer_step_bayes(double v_z_A2B, const MeasurementChannel& channel, double power, int order = 61);

SeTrajectory run_se_bayes(const SeConfig& config);
/// Linear channels: v_x_A2B = 1/E[L/(sigma2 + v L)], v_x_B2A = phi(2 v_x_A2B / delta).
SeTrajectory run_se_linear(const SeConfig& config);

/// 2 / E[u_min^2 L / (sigma2 + u_min^2 L)].
double reconstruction_threshold(const SpectralModel& spectrum, double sigma2, double u_min);

/// Normalized direction error of the posterior mean: 2 - 2 sqrt((P - v)/P).
double se_metric_normalized(double v_bar, double power);

/// Module-A map of the linear SE chart: v_B2A -> 1/E[L/(sigma2 + v_B2A L)].
double se_chart_module_a(double v_B2A, double sigma2, const SpectralModel& spectrum);

struct SeChart {
  std::vector<double> v_B2A;         // grid
  std::vector<double> module_a;      // v_A2B = module-A map of v_B2A
  std::vector<double> module_b;      // v_B2A = phi(2 module_a / delta)
  int crossings = 0;
  std::vector<SeState> trajectory;   // zigzag from v_B2A = P
};

/// Linear-channel SE chart on a log grid of v_B2A in [v_min, P].
SeChart se_chart(const SeConfig& config, double v_min, int points);

/// Number of sign changes of phi(2 A(v)/delta) - v over the grid.
int count_crossings(const std::vector<double>& v, const std::vector<double>& mapped);

}  // namespace goamp
