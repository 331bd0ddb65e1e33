#pragma once

#include <cstdint>
#include <random>

namespace vprkit {

// Seedable portable generator. The engine is the standard 64-bit Mersenne
// Twister, whose output sequence is fixed by the C++ standard; the
// conversions to uniform and normal variates are done here rather than with
// <random> distributions, whose algorithms are implementation defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t index(std::uint64_t n);

  // Standard normal via Box-Muller. Consumes exactly two uniforms per call.
  double normal();

  // +1 or -1 from the top bit of one draw.
  double sign() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }

 private:
  std::mt19937_64 engine_;
};

// Derives an independent stream seed from a base seed and a stream id.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace vprkit
