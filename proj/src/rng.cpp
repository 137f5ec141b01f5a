#include "fstest/rng.hpp"

namespace fstest {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::string_view purpose,
                                 std::uint64_t index) {
  const std::uint64_t state = splitmix64(seed ^ fnv1a64(purpose));
  return splitmix64(state ^ splitmix64(index));
}

}  // namespace fstest
