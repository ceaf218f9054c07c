#ifndef LAIN_RNG_HPP_
#define LAIN_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace lain {

// Derives an independent 64-bit stream seed from a master seed and a label.
//
// Algorithm (stable across platforms, operates on values not bytes in memory):
//   h   = FNV-1a 64 over the UTF-8 bytes of `label`
//   out = mix64(master ^ mix64(h + 0x9E3779B97F4A7C15))
// where mix64 is the splitmix64 finalizer.
std::uint64_t derive_stream_seed(std::uint64_t master, std::string_view label);

std::uint64_t mix64(std::uint64_t x);

// Seeded generator with implementation-independent transforms.
//
// std::mt19937_64 output is fully specified by the standard, the
// <random> distributions are not, so the uniform/normal/integer transforms
// are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 bits of precision.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer on [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  // Standard normal via Box-Muller; caches the second variate.
  double normal();
  bool bernoulli(double p) { return uniform() < p; }

  // Fisher-Yates permutation of 0..n-1.
  std::vector<int> permutation(int n);

  bool operator==(const Rng&) const = default;

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lain

#endif  // LAIN_RNG_HPP_
