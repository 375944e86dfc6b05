#pragma once

#include "goamp/denoisers.hpp"
#include "goamp/problem.hpp"

#include <string>
#include <vector>

namespace goamp {

struct DampingConfig {
  double theta_x = 1.0;
  double theta_z = 1.0;
};

struct GoampOptions {
  int iterations = 20;
  DampingConfig damping;
  /// false zeroes every divergence in the mean messages (diagnostic ablation).
  bool onsager = true;
  /// Replace the LMMSE resolvent by the matched filter 1/(gamma + N).
  bool matched_filter = false;
  /// Use ||z_B2A||^2/M - P for the z-side variance instead of the Bayesian form.
  bool general_v_update = false;
  /// Keep z_B2A at t = 0 and every x_A2B for diagnostics.
  bool keep_history = false;
};

struct GoampState {
  Vector x_B2A;
  double v_x_B2A = 0.0;
  Vector z_B2A;
  double v_z_B2A = 0.0;
  Vector x_A2B;
  double v_x_A2B = 0.0;
  Vector z_A2B;
  double v_z_A2B = 0.0;
  Vector x_B;
  int t = 0;
};

struct IterationRecord {
  int t = 0;
  double err_unnorm = 0.0;
  double err_normdir = 0.0;
  double v_x_B2A = 0.0;
  double v_z_B2A = 0.0;
  double v_x_A2B = 0.0;
  double v_z_A2B = 0.0;
};

struct GoampHistory {
  Vector z_B2A_init;
  std::vector<Vector> x_A2B;  // one entry per iteration
};

struct Trajectory {
  std::vector<IterationRecord> records;
  Vector estimate;
  bool truncated = false;
  std::vector<std::string> flags;
  GoampHistory history;

  bool has_flag(const std::string& f) const;
  void add_flag(const std::string& f);
};

/// Floor applied to every variance message.
double variance_floor(double power);

GoampState goamp_init(const ProblemInstance& problem, const GoampOptions& opts = {});

void module_a_step(GoampState& state, const SvdSensingOperator& op, double power, const GoampOptions& opts = {});
void module_b_outer_step(GoampState& state, const MeasurementChannel& channel, const Vector& y, double power,
                         const GoampOptions& opts = {});
void module_b_inner_step(GoampState& state, const InnerPrior& prior, Index m, double power,
                         const GoampOptions& opts = {});

/// theta * fresh + (1 - theta) * old on the B->A messages; the rest of
/// `fresh` is kept as is.
GoampState damp(const GoampState& fresh, const GoampState& old, const DampingConfig& cfg);

Trajectory run_goamp(const ProblemInstance& problem, const GoampOptions& opts, const InnerPrior& prior);
Trajectory run_goamp(const ProblemInstance& problem, const GoampOptions& opts);

/// Linear channels only: z_B2A stays at y and v_z_B2A at sigma^2.
Trajectory run_oamp_linear(const ProblemInstance& problem, const GoampOptions& opts, const InnerPrior& prior);
Trajectory run_oamp_linear(const ProblemInstance& problem, const GoampOptions& opts);

struct OrthogonalityReport {
  double z_init_corr = 0.0;
  std::vector<double> x_corr;         // per iteration
  std::vector<double> x_excess_kurt;  // off-support error of x_A2B, per iteration
};

/// Uses the hidden z and x; requires a trajectory run with keep_history.
OrthogonalityReport diagnostics_orthogonality(const ProblemInstance& problem, const Trajectory& trajectory);

}  // namespace goamp
