#include "sp2cw/rng.hpp"

#include <cmath>
#include <numbers>

namespace sp2cw {

namespace {

// SplitMix64 finalizer (Steele et al.), a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

RngHandle RngHandle::split(std::uint64_t stream_index) const {
  // Feed the stream index through the mixer twice so that adjacent
  // indices land far apart even for small seeds.
  return RngHandle(mix64(mix64(seed_ ^ 0xa5a5a5a5a5a5a5a5ull) + stream_index));
}

std::uint64_t RngHandle::next_u64() { return mix64(seed_ + 0x9e3779b97f4a7c15ull * ++counter_); }

double RngHandle::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngHandle::next_gaussian() {
  // u1 in (0, 1] so the log is finite.
  const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace sp2cw
