#pragma once

#include "goamp/core.hpp"
#include "goamp/sensing_operator.hpp"

#include <cstdint>
#include <memory>

namespace goamp {

/// One random instance of y = g(Ax, w). z and w are kept for diagnostics only.
struct ProblemInstance {
  SparseSignal signal;
  std::shared_ptr<const SvdSensingOperator> op;
  MeasurementChannel channel = MeasurementChannel::linear(0.0);
  Vector y;
  Vector z;
  Vector w;
  std::uint64_t seed = 0;

  Index m() const { return op->rows(); }
  Index n() const { return op->cols(); }
  double power() const { return signal.power; }
};

/// Draws operator, signal and noise from RandomStream(seed, stream) in that order.
ProblemInstance make_problem(Index n, Index k, Index m, double kappa, const NonzeroLaw& law,
                             const MeasurementChannel& channel, std::uint64_t seed, std::uint64_t stream);

/// Same signal and noise draws on a caller-supplied operator.
ProblemInstance make_problem(std::shared_ptr<const SvdSensingOperator> op, Index k, const NonzeroLaw& law,
                             const MeasurementChannel& channel, RandomStream& rng, std::uint64_t seed = 0);

}  // namespace goamp
