#pragma once

#include <cstdint>

namespace mrac {

// Counter-based generator: draw k of stream s is splitmix64 applied to a
// key built from (seed, stream, k). The sequence does not depend on the
// standard library, so logs reproduce across platforms and compilers.
class CounterRng {
 public:
  static constexpr const char* kName = "splitmix64-counter-v1";

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64();
  // Uniform in (0, 1); never returns 0.
  double uniform();
  // Standard normal by Box-Muller, one value per call.
  double normal();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace mrac
