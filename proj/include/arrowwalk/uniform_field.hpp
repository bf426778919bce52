#pragma once

#include <array>
#include <cstdint>

#include "arrowwalk/arrow.hpp"

namespace arrowwalk {

/// Philox4x64 with 10 rounds (Salmon et al., SC'11).
class Philox4x64 {
 public:
  __extension__ using Wide = unsigned __int128;
  using Counter = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  static constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;

  static constexpr Counter apply(Counter c, Key k) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        k[0] += kW0;
        k[1] += kW1;
      }
      const Wide p0 = static_cast<Wide>(kM0) * c[0];
      const Wide p1 = static_cast<Wide>(kM1) * c[2];
      const auto hi0 = static_cast<std::uint64_t>(p0 >> 64);
      const auto lo0 = static_cast<std::uint64_t>(p0);
      const auto hi1 = static_cast<std::uint64_t>(p1 >> 64);
      const auto lo1 = static_cast<std::uint64_t>(p1);
      c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
    return c;
  }
};

/// Role tags separate the independent uniform families a construction needs
/// at the same (site, level).
namespace role {
inline constexpr std::uint64_t kArrow = 0;
inline constexpr std::uint64_t kBlockCount = 1;
inline constexpr std::uint64_t kBlockSelect = 2;
inline constexpr std::uint64_t kSwapLink = 16;
}  // namespace role

/// Deterministic shared randomness: a pure function of
/// (seed, stream, site, index, role) to [0, 1).
class UniformField {
 public:
  explicit UniformField(std::uint64_t seed = 0) noexcept : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t bits(std::uint64_t stream, Site site, std::int64_t index,
                     std::uint64_t role_tag = role::kArrow) const noexcept {
    const Philox4x64::Counter ctr = {stream, static_cast<std::uint64_t>(site),
                                     static_cast<std::uint64_t>(index), role_tag};
    return Philox4x64::apply(ctr, {seed_, 0})[0];
  }

  double uniform(std::uint64_t stream, Site site, std::int64_t index,
                 std::uint64_t role_tag = role::kArrow) const noexcept {
    return static_cast<double>(bits(stream, site, index, role_tag) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t seed_;
};

}  // namespace arrowwalk
