#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace l1conc {

/// Philox4x32-10 counter-based block cipher (Salmon et al., SC'11).
///
/// Maps a 128-bit counter and a 64-bit key to 128 pseudo-random bits. There is
/// no hidden state, so any block of any stream can be produced independently.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter block(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// Identifies one independent random stream: the master seed is the cipher
/// key, the trial index selects a disjoint 2^64-block region of counter space.
struct StreamKey {
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;

  friend constexpr bool operator==(const StreamKey&, const StreamKey&) = default;
};

/// Sequential generator over the stream named by a StreamKey.
///
/// Satisfies std::uniform_random_bit_generator. Cheap to construct; one per
/// trial is the intended usage.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr StreamRng(StreamKey key) noexcept
      : key_{static_cast<std::uint32_t>(key.master_seed), static_cast<std::uint32_t>(key.master_seed >> 32)},
        trial_lo_(static_cast<std::uint32_t>(key.trial_index)),
        trial_hi_(static_cast<std::uint32_t>(key.trial_index >> 32)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    if (used_ == 2) refill();
    return buffer_[used_++];
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1); safe as a logarithm argument.
  double uniform_open() noexcept { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal variate (Box-Muller; the second variate of each pair is cached).
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform_open()));
    const double angle = 2.0 * kPi * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;

  constexpr void refill() noexcept {
    const auto lo = static_cast<std::uint32_t>(block_);
    const auto hi = static_cast<std::uint32_t>(block_ >> 32);
    const auto out = Philox4x32::block({trial_lo_, trial_hi_, lo, hi}, key_);
    ++block_;
    buffer_[0] = (std::uint64_t{out[1]} << 32) | out[0];
    buffer_[1] = (std::uint64_t{out[3]} << 32) | out[2];
    used_ = 0;
  }

  Philox4x32::Key key_;
  std::uint32_t trial_lo_;
  std::uint32_t trial_hi_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int used_ = 2;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Mixes a seed with a label into a fresh 64-bit seed (SplitMix64 finalizer).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (label + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace l1conc
