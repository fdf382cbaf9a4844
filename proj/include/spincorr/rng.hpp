#pragma once

#include <array>
#include <cstdint>

namespace spincorr {

// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw; SC'11).
// Pure function of (counter, key): any partitioning of a run over workers
// reproduces identical draws.
struct Philox4x32 {
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Block generate(Block ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      const Block next = {
          static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
          static_cast<std::uint32_t>(p1),
          static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
          static_cast<std::uint32_t>(p0),
      };
      ctr = next;
      if (round < 9) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
    }
    return ctr;
  }
};

inline std::uint64_t u64_from_words(std::uint32_t lo, std::uint32_t hi) {
  return static_cast<std::uint64_t>(lo) | (static_cast<std::uint64_t>(hi) << 32);
}

// [0, 1) with 53 random bits; the conversion is exact.
inline double to_unit_interval(std::uint64_t u) {
  return static_cast<double>(u >> 11) * 0x1.0p-53;
}

// [-1, 1); exact (2r and 2r-1 are both representable).
inline double to_symmetric_interval(std::uint64_t u) {
  return 2.0 * to_unit_interval(u) - 1.0;
}

// Draw stream for one trial. The counter is (trial_lo, trial_hi, draw,
// stream) and the key is the 64-bit experiment seed, so every draw is a pure
// function of (seed, trial index, draw index, stream).
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial, std::uint32_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        trial_lo_(static_cast<std::uint32_t>(trial)),
        trial_hi_(static_cast<std::uint32_t>(trial >> 32)),
        stream_(stream) {}

  Philox4x32::Block next_block() {
    return Philox4x32::generate({trial_lo_, trial_hi_, draw_++, stream_}, key_);
  }

  std::uint32_t draws_consumed() const { return draw_; }

 private:
  Philox4x32::Key key_;
  std::uint32_t trial_lo_;
  std::uint32_t trial_hi_;
  std::uint32_t stream_;
  std::uint32_t draw_ = 0;
};

}  // namespace spincorr
