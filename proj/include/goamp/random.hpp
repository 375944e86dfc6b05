#pragma once

#include <cstdint>
#include <random>

namespace goamp {

std::uint64_t splitmix64(std::uint64_t x);

/// Per-trial randomness. A stream is a pure function of
/// (master seed, stream id), so trial t draws the same numbers whether
/// it runs first, last, or on another worker.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_id);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace goamp
