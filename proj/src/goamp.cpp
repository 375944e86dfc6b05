#include "goamp/goamp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace goamp {

namespace {

constexpr double kXiEps = 1e-12;

void check_xi(double xi, const char* where) {
  if (!(xi > kXiEps && xi < 1.0 - kXiEps)) {
    throw IllConditioned(std::string(where) + ": divergence " + std::to_string(xi) + " outside (0, 1)");
  }
}

double general_v(const Vector& z, double power, bool& clamped) {
  const double v = z.squaredNorm() / static_cast<double>(z.size()) - power;
  clamped = !(v > variance_floor(power));
  return clamped ? variance_floor(power) : v;
}

IterationRecord make_record(const GoampState& s, const Vector& x) {
  IterationRecord r;
  r.t = s.t;
  r.err_unnorm = unnormalized_sq_error(s.x_B, x);
  r.err_normdir = s.x_B.norm() > 0.0 ? normalized_direction_error(s.x_B, x) : std::numeric_limits<double>::quiet_NaN();
  r.v_x_B2A = s.v_x_B2A;
  r.v_z_B2A = s.v_z_B2A;
  r.v_x_A2B = s.v_x_A2B;
  r.v_z_A2B = s.v_z_A2B;
  return r;
}

template <class OuterStep>
Trajectory run_loop(const ProblemInstance& problem, const GoampOptions& opts, const InnerPrior& prior,
                    GoampState state, OuterStep&& outer) {
  require(opts.iterations >= 1, "run_goamp: iterations must be at least 1");
  require(opts.damping.theta_x > 0.0 && opts.damping.theta_x <= 1.0, "damping theta_x must lie in (0, 1]");
  require(opts.damping.theta_z > 0.0 && opts.damping.theta_z <= 1.0, "damping theta_z must lie in (0, 1]");
  const double power = problem.power();
  const Vector& x = problem.signal.values;

  Trajectory traj;
  traj.records.reserve(opts.iterations + 1);
  traj.records.push_back(make_record(state, x));
  if (opts.keep_history) traj.history.z_B2A_init = state.z_B2A;

  for (int t = 0; t < opts.iterations; ++t) {
    GoampState next = state;
    try {
      module_a_step(next, *problem.op, power, opts);
      outer(next);
      module_b_inner_step(next, prior, problem.m(), power, opts);
    } catch (const IllConditioned&) {
      traj.truncated = true;
      traj.add_flag("ill_conditioned");
      break;
    }
    if (t >= 1) next = damp(next, state, opts.damping);
    next.t = t + 1;
    state = std::move(next);
    traj.records.push_back(make_record(state, x));
    if (opts.keep_history) traj.history.x_A2B.push_back(state.x_A2B);
  }
  traj.estimate = state.x_B;
  return traj;
}

double excess_kurtosis(const std::vector<double>& e) {
  if (e.size() < 4) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(e.size());
  double mean = 0.0;
  for (double v : e) mean += v;
  mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : e) {
    const double d = (v - mean) * (v - mean);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  return m4 / (m2 * m2) - 3.0;
}

double normalized_corr(const Vector& a, const Vector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

}  // namespace

bool Trajectory::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

void Trajectory::add_flag(const std::string& f) {
  if (!has_flag(f)) flags.push_back(f);
}

double variance_floor(double power) { return 1e-12 * power; }

GoampState goamp_init(const ProblemInstance& problem, const GoampOptions& opts) {
  const Index n = problem.n();
  const Index m = problem.m();
  const double power = problem.power();
  const double floor = variance_floor(power);

  GoampState s;
  s.x_B2A = Vector::Zero(n);
  s.v_x_B2A = power;
  s.x_B = Vector::Zero(n);
  s.x_A2B = Vector::Zero(n);
  s.z_A2B = Vector::Zero(m);
  s.v_x_A2B = power;
  s.v_z_A2B = power;

  const auto outer = outer_denoise(problem.channel, Vector::Zero(m), problem.y, power);
  const double xi = outer.xi;
  if (!(1.0 - xi > kXiEps)) throw DegenerateInput("goamp_init: outer divergence at t = -1 is 1");
  s.z_B2A = opts.onsager ? Vector(outer.mean / (1.0 - xi)) : outer.mean;
  if (opts.general_v_update) {
    bool clamped = false;
    s.v_z_B2A = general_v(s.z_B2A, power, clamped);
  } else {
    s.v_z_B2A = std::max(xi * power / (1.0 - xi), floor);
  }
  s.t = 0;
  return s;
}

void module_a_step(GoampState& s, const SvdSensingOperator& op, double power, const GoampOptions& opts) {
  const double floor = variance_floor(power);
  const double n = static_cast<double>(op.cols());
  const double m = static_cast<double>(op.rows());
  const double vx = std::max(s.v_x_B2A, floor);
  const double vz = std::max(s.v_z_B2A, floor);
  const double ratio = vz / vx;
  const double gamma = n * ratio;

  const Vector ax = op.apply(s.x_B2A);
  const Vector r = s.z_B2A - ax;
  Vector delta;
  Vector a_delta;
  double xi_z = 0.0;
  double xi_x = 0.0;
  if (opts.matched_filter) {
    const Vector rr = r / (gamma + n);
    delta = op.apply_adjoint(rr);
    a_delta = op.apply(delta);
    xi_z = 1.0 / (ratio + 1.0);
    xi_x = ratio / (ratio + 1.0);
  } else {
    const Vector rr = op.resolvent_apply(gamma, r);
    delta = op.apply_adjoint(rr);
    // A A^T (gamma I + A A^T)^{-1} r = r - gamma (gamma I + A A^T)^{-1} r
    a_delta = r - gamma * rr;
    const Vector& lambda = op.eigenvalues();
    xi_z = (lambda.array() / (ratio + lambda.array())).mean();
    xi_x = (ratio / (ratio + lambda.array())).mean();
  }
  check_xi(xi_z, "module A (z)");
  check_xi(xi_x, "module A (x)");

  const Vector x_A = s.x_B2A + (n / m) * delta;
  const Vector z_A = ax + a_delta;

  s.v_x_A2B = std::max(m * (x_A - s.x_B2A).squaredNorm() / (n * (1.0 - xi_x) * (1.0 - xi_x)), floor);
  if (opts.onsager) {
    s.x_A2B = (x_A - xi_x * s.x_B2A) / (1.0 - xi_x);
    s.z_A2B = (z_A - xi_z * s.z_B2A) / (1.0 - xi_z);
  } else {
    s.x_A2B = x_A;
    s.z_A2B = z_A;
  }
  const double v_alt = power - s.z_A2B.squaredNorm() / m;
  const double v_z = v_alt > 0.0 ? v_alt : xi_z * vz / (1.0 - xi_z);
  s.v_z_A2B = std::max(v_z, floor);
}

void module_b_outer_step(GoampState& s, const MeasurementChannel& channel, const Vector& y, double power,
                         const GoampOptions& opts) {
  const double floor = variance_floor(power);
  const double v = std::max(s.v_z_A2B, floor);
  const auto den = outer_denoise(channel, s.z_A2B, y, v);
  const double xi = den.xi;
  if (!(xi < 1.0 - kXiEps)) throw IllConditioned("module B outer: divergence reached 1");
  s.z_B2A = opts.onsager ? Vector((den.mean - xi * s.z_A2B) / (1.0 - xi)) : den.mean;
  if (opts.general_v_update) {
    bool clamped = false;
    s.v_z_B2A = general_v(s.z_B2A, power, clamped);
  } else {
    s.v_z_B2A = std::max(xi * v / (1.0 - xi), floor);
  }
}

void module_b_inner_step(GoampState& s, const InnerPrior& prior, Index m, double power, const GoampOptions& opts) {
  const double floor = variance_floor(power);
  const double v = std::max(s.v_x_A2B, floor);
  const auto n = static_cast<double>(s.x_A2B.size());
  const auto den = bg_denoise(s.x_A2B, v / static_cast<double>(m), prior);
  const double xi = bg_divergence_xi(den.variance_sum, v);
  const double a = static_cast<double>(m) / n * xi;
  if (!(1.0 - a > kXiEps)) throw IllConditioned("module B inner: divergence reached 1");
  s.x_B = den.mean;
  s.x_B2A = opts.onsager ? Vector((den.mean - a * s.x_A2B) / (1.0 - a)) : den.mean;
  s.v_x_B2A = std::max(den.variance_sum / (1.0 - a), floor);
}

GoampState damp(const GoampState& fresh, const GoampState& old, const DampingConfig& cfg) {
  require(cfg.theta_x > 0.0 && cfg.theta_x <= 1.0, "damp: theta_x must lie in (0, 1]");
  require(cfg.theta_z > 0.0 && cfg.theta_z <= 1.0, "damp: theta_z must lie in (0, 1]");
  GoampState out = fresh;
  if (cfg.theta_x < 1.0) {
    out.x_B2A = cfg.theta_x * fresh.x_B2A + (1.0 - cfg.theta_x) * old.x_B2A;
    out.v_x_B2A = cfg.theta_x * fresh.v_x_B2A + (1.0 - cfg.theta_x) * old.v_x_B2A;
  }
  if (cfg.theta_z < 1.0) {
    out.z_B2A = cfg.theta_z * fresh.z_B2A + (1.0 - cfg.theta_z) * old.z_B2A;
    out.v_z_B2A = cfg.theta_z * fresh.v_z_B2A + (1.0 - cfg.theta_z) * old.v_z_B2A;
  }
  return out;
}

Trajectory run_goamp(const ProblemInstance& problem, const GoampOptions& opts, const InnerPrior& prior) {
  const double power = problem.power();
  GoampState init = goamp_init(problem, opts);
  bool clamped_any = false;
  if (opts.general_v_update) {
    bool c = false;
    general_v(init.z_B2A, power, c);
    clamped_any = c;
  }
  auto traj = run_loop(problem, opts, prior, std::move(init), [&](GoampState& s) {
    module_b_outer_step(s, problem.channel, problem.y, power, opts);
    if (opts.general_v_update && s.v_z_B2A <= variance_floor(power)) clamped_any = true;
  });
  if (clamped_any) traj.add_flag("v_clamped");
  return traj;
}

Trajectory run_goamp(const ProblemInstance& problem, const GoampOptions& opts) {
  return run_goamp(problem, opts, InnerPrior::from_sparsity(problem.n(), problem.signal.k, problem.power()));
}

Trajectory run_oamp_linear(const ProblemInstance& problem, const GoampOptions& opts, const InnerPrior& prior) {
  require(problem.channel.is_linear(), "run_oamp_linear: linear channel required");
  const double power = problem.power();
  const double v_noise = std::max(problem.channel.noise_var(), variance_floor(power));
  GoampState init;
  init.x_B2A = Vector::Zero(problem.n());
  init.v_x_B2A = power;
  init.x_B = Vector::Zero(problem.n());
  init.x_A2B = Vector::Zero(problem.n());
  init.z_A2B = Vector::Zero(problem.m());
  init.v_x_A2B = power;
  init.v_z_A2B = power;
  init.z_B2A = problem.y;
  init.v_z_B2A = v_noise;
  return run_loop(problem, opts, prior, std::move(init), [&](GoampState& s) {
    s.z_B2A = problem.y;
    s.v_z_B2A = v_noise;
  });
}

Trajectory run_oamp_linear(const ProblemInstance& problem, const GoampOptions& opts) {
  return run_oamp_linear(problem, opts, InnerPrior::from_sparsity(problem.n(), problem.signal.k, problem.power()));
}

OrthogonalityReport diagnostics_orthogonality(const ProblemInstance& problem, const Trajectory& trajectory) {
  const auto& hist = trajectory.history;
  if (hist.z_B2A_init.size() == 0 || problem.z.size() == 0) {
    throw InvalidArgument("diagnostics_orthogonality: run with keep_history and a problem with hidden z");
  }
  const Vector& x = problem.signal.values;
  OrthogonalityReport rep;
  rep.z_init_corr = normalized_corr(problem.z, hist.z_B2A_init - problem.z);

  std::vector<bool> on_support(static_cast<std::size_t>(x.size()), false);
  for (Index i : problem.signal.support) on_support[static_cast<std::size_t>(i)] = true;
  std::vector<double> off;
  off.reserve(static_cast<std::size_t>(x.size()));
  for (const auto& xa : hist.x_A2B) {
    const Vector err = xa - x;
    rep.x_corr.push_back(normalized_corr(x, err));
    off.clear();
    for (Index i = 0; i < err.size(); ++i) {
      if (!on_support[static_cast<std::size_t>(i)]) off.push_back(err[i]);
    }
    rep.x_excess_kurt.push_back(excess_kurtosis(off));
  }
  return rep;
}

}  // namespace goamp
