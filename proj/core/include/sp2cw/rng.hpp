// Counter-based random streams. Every draw is a pure function of
// (seed, counter), so sequences are reproducible regardless of worker
// count or evaluation order: parallel code splits one stream per work
// item by index instead of sharing a generator.
#pragma once

#include <cstdint>

namespace sp2cw {

class RngHandle {
 public:
  explicit RngHandle(std::uint64_t seed) : seed_(seed) {}

  // Independent stream derived from (seed, stream_index).
  RngHandle split(std::uint64_t stream_index) const;

  std::uint64_t next_u64();

  // Uniform in [0, 1), 53-bit mantissa.
  double next_double();

  // Standard normal via Box-Muller on the uniform stream.
  double next_gaussian();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace sp2cw
