#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace noma {

/// Philox4x64-10 counter-based generator. A (key, counter) pair maps to
/// four 64-bit words through a fixed bijection, so any draw index can be
/// generated independently of all others. That makes parallel Monte Carlo
/// reproducible regardless of how work is scheduled: stream identity lives
/// in the key, position in the counter.
struct Philox4x64 {
  using Block = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  static Block generate(const Key& key, const Block& counter);
};

/// Maps a 64-bit word to a double in (0, 1]; the open lower end keeps
/// -log(u) finite.
inline double uniform_open_unit(std::uint64_t w) {
  return static_cast<double>((w >> 11) + 1) * 0x1.0p-53;
}

/// Unit-mean exponential variate from one 64-bit word.
inline double exponential_unit(std::uint64_t w) {
  return -std::log(uniform_open_unit(w));
}

}  // namespace noma
