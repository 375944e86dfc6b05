#include "goamp/problem.hpp"

namespace goamp {

ProblemInstance make_problem(std::shared_ptr<const SvdSensingOperator> op, Index k, const NonzeroLaw& law,
                             const MeasurementChannel& channel, RandomStream& rng, std::uint64_t seed) {
  require(op != nullptr, "make_problem: null operator");
  ProblemInstance p;
  p.signal = make_sparse_signal(op->cols(), k, law, rng);
  p.op = std::move(op);
  p.channel = channel;
  p.z = p.op->apply(p.signal.values);
  auto meas = measure(channel, p.z, rng);
  p.y = std::move(meas.y);
  p.w = std::move(meas.w);
  p.seed = seed;
  return p;
}

ProblemInstance make_problem(Index n, Index k, Index m, double kappa, const NonzeroLaw& law,
                             const MeasurementChannel& channel, std::uint64_t seed, std::uint64_t stream) {
  RandomStream rng(seed, stream);
  auto op = std::make_shared<const SvdSensingOperator>(build_operator(m, n, kappa, rng));
  return make_problem(std::move(op), k, law, channel, rng, seed);
}

}  // namespace goamp
