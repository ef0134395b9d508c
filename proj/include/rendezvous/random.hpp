#pragma once

#include <cstdint>
#include <random>

namespace rdv {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent sub-stream seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return mix_seed(mix_seed(master) ^ (stream * 0xd1b54a32d192ed03ULL));
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Uniform on [a, b]; the bounds may come in either order.
inline double uniform(Rng& rng, double a, double b) {
  if (a > b) std::swap(a, b);
  if (a == b) return a;
  return std::uniform_real_distribution<double>(a, b)(rng);
}

inline double standard_normal(Rng& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

// mean + sd * z; a zero sd still consumes a draw so streams stay aligned.
inline double normal(Rng& rng, double mean, double sd) {
  return mean + sd * standard_normal(rng);
}

inline double random_sign(Rng& rng) {
  return std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
}

inline std::size_t random_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace rdv
