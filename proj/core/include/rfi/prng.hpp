#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace rfi {

// Philox4x32-10 counter-based generator (Salmon et al. constants).
// Streams are cheap: a (key, stream) pair addresses an independent 2^64-block
// sequence, so per-chain / per-image generators can be derived without
// coordination and replayed exactly on any platform.
class Philox {
 public:
  explicit Philox(std::uint64_t key = 0, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
        ctr_{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

  using result_type = std::uint32_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return 0xffffffffu; }

  std::uint32_t next_u32() {
    if (buf_pos_ == 4) refill();
    return buf_[buf_pos_++];
  }
  result_type operator()() { return next_u32(); }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  // Uniform on [0,1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Unbiased uniform integer in [0, n), n >= 1, by rejection.
  std::uint64_t next_below(std::uint64_t n);

  // Standard normal via Box-Muller; the pair's second value is cached.
  double next_gaussian();

  // Raw block function, exposed for the known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> buf_{};
  int buf_pos_ = 4;
  double gauss_cache_ = 0.0;
  bool have_gauss_ = false;
};

// splitmix64 finalizer; used to spread seeds over the key space.
std::uint64_t mix64(std::uint64_t v);

// Purpose tags keep derived streams from colliding across subsystems.
enum class StreamTag : std::uint64_t {
  Chain = 1,
  Init = 2,
  Image = 3,
  RotationSet = 4,
  Calibration = 5,
  Psi = 6,
  Alignment = 7,
  Verify = 8,
  Test = 9,
};

Philox derive_stream(std::uint64_t master_seed, StreamTag tag, std::uint64_t index);

// Poisson sampling by CDF inversion for mean <= 10; larger means are split
// into <=10 chunks and summed (exact by additivity). The rates used in this
// project never reach the split branch.
std::uint32_t sample_poisson(Philox& rng, double mean);

// Uniform m-subset of {0,...,M-1}, ascending. Partial Fisher-Yates.
std::vector<std::uint32_t> sample_subset(Philox& rng, std::uint32_t M, std::uint32_t m);

}  // namespace rfi
