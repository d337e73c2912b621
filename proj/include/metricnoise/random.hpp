#pragma once

// Counter-based random streams. Every stream is addressed by a 64-bit seed
// plus a (domain, a, b) triple, so draw b at lag k is reproducible without
// any shared generator state.

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>

namespace metricnoise {

/// Philox4x32-10 block function (Salmon et al., SC'11).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;

  static constexpr Counter block(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }
};

/// Stream domains keep the simulation, weight and permutation streams of one
/// seed disjoint.
enum class StreamDomain : std::uint32_t {
  Simulation = 1,
  BootstrapWeights = 2,
  Permutation = 3,
  Test = 0xFFFF,
};

/// UniformRandomBitGenerator over the Philox counter space.
class CounterStream {
 public:
  using result_type = std::uint64_t;

  CounterStream(std::uint64_t seed, StreamDomain domain, std::uint32_t a,
                std::uint32_t b) noexcept
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        a_(a),
        b_(b),
        domain_(static_cast<std::uint32_t>(domain)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    if (pos_ == 4) refill();
    const std::uint64_t lo = buf_[pos_];
    const std::uint64_t hi = buf_[pos_ + 1];
    pos_ += 2;
    return lo | (hi << 32);
  }

  /// Next 32 raw bits.
  std::uint32_t next_u32() noexcept {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

 private:
  void refill() noexcept {
    buf_ = Philox4x32::block({block_++, a_, b_, domain_}, key_);
    pos_ = 0;
  }

  Philox4x32::Key key_;
  std::uint32_t a_;
  std::uint32_t b_;
  std::uint32_t domain_;
  std::uint32_t block_ = 0;
  Philox4x32::Counter buf_{};
  std::size_t pos_ = 4;
};

/// SplitMix64 finaliser; used to derive child seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace metricnoise
