#include "noma/rng.hpp"

namespace noma {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ull;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ull;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

inline void philox_round(Philox4x64::Block& c, const Philox4x64::Key& k) {
  const unsigned __int128 p0 = static_cast<unsigned __int128>(kMul0) * c[0];
  const unsigned __int128 p1 = static_cast<unsigned __int128>(kMul1) * c[2];
  const std::uint64_t hi0 = static_cast<std::uint64_t>(p0 >> 64);
  const std::uint64_t lo0 = static_cast<std::uint64_t>(p0);
  const std::uint64_t hi1 = static_cast<std::uint64_t>(p1 >> 64);
  const std::uint64_t lo1 = static_cast<std::uint64_t>(p1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

Philox4x64::Block Philox4x64::generate(const Key& key, const Block& counter) {
  Block c = counter;
  Key k = key;
  philox_round(c, k);
  for (int r = 1; r < 10; ++r) {
    k[0] += kWeyl0;
    k[1] += kWeyl1;
    philox_round(c, k);
  }
  return c;
}

}  // namespace noma
