#pragma once

// Named random streams. Every replication of every campaign draws from its own
// engine, derived from (seed, purpose, index):
//
//   key    = fnv1a64(purpose)
//   state  = splitmix64(seed ^ key)
//   state' = splitmix64(state ^ splitmix64(index))
//   engine = std::mt19937_64(state')
//
// so results do not depend on how replications are scheduled across workers.

#include <cstdint>
#include <random>
#include <string_view>

namespace fstest {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view s);
std::uint64_t derive_stream_seed(std::uint64_t seed, std::string_view purpose,
                                 std::uint64_t index);

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::string_view purpose, std::uint64_t index)
      : engine_(derive_stream_seed(seed, purpose, index)) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  /// Gamma(shape, scale 1).
  double gamma(double shape) { return std::gamma_distribution<double>(shape, 1.0)(engine_); }
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace fstest
