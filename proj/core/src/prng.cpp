#include "rfi/prng.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace rfi {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline std::array<std::uint32_t, 4> round_once(const std::array<std::uint32_t, 4>& c,
                                               const std::array<std::uint32_t, 2>& k) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kPhiloxM0, c[0], hi0, lo0);
  mulhilo(kPhiloxM1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> Philox::block(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
  for (int r = 0; r < 10; ++r) {
    ctr = round_once(ctr, key);
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

void Philox::refill() {
  buf_ = block(ctr_, key_);
  buf_pos_ = 0;
  // 64-bit block counter in words 0,1; words 2,3 hold the stream id.
  if (++ctr_[0] == 0) ++ctr_[1];
}

std::uint64_t Philox::next_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("next_below: n must be positive");
  if (n == 1) return 0;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v < limit) return v % n;
  }
}

double Philox::next_gaussian() {
  if (have_gauss_) {
    have_gauss_ = false;
    return gauss_cache_;
  }
  double u1 = next_double();
  const double u2 = next_double();
  while (u1 <= 0.0) u1 = next_double();  // log(0) guard
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  gauss_cache_ = r * std::sin(a);
  have_gauss_ = true;
  return r * std::cos(a);
}

std::uint64_t mix64(std::uint64_t v) {
  v += 0x9E3779B97F4A7C15ull;
  v = (v ^ (v >> 30)) * 0xBF58476D1CE4E5B9ull;
  v = (v ^ (v >> 27)) * 0x94D049BB133111EBull;
  return v ^ (v >> 31);
}

Philox derive_stream(std::uint64_t master_seed, StreamTag tag, std::uint64_t index) {
  const std::uint64_t key = mix64(master_seed ^ mix64(static_cast<std::uint64_t>(tag)));
  const std::uint64_t stream = mix64(index ^ (static_cast<std::uint64_t>(tag) << 56));
  return Philox(key, stream);
}

std::uint32_t sample_poisson(Philox& rng, double mean) {
  if (!(mean >= 0.0)) throw std::invalid_argument("sample_poisson: mean must be >= 0");
  if (mean == 0.0) return 0;
  if (mean > 10.0) {
    // Exact split: Poisson(a+b) = Poisson(a) + Poisson(b) independently.
    const auto chunks = static_cast<std::uint32_t>(std::ceil(mean / 10.0));
    const double part = mean / chunks;
    std::uint32_t total = 0;
    for (std::uint32_t i = 0; i < chunks; ++i) total += sample_poisson(rng, part);
    return total;
  }
  // CDF inversion; mean <= 10 keeps the loop short and exp(-mean) well away
  // from underflow.
  const double u = rng.next_double();
  double p = std::exp(-mean);
  double cdf = p;
  std::uint32_t k = 0;
  while (u >= cdf && k < 1000000) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

std::vector<std::uint32_t> sample_subset(Philox& rng, std::uint32_t M, std::uint32_t m) {
  if (m > M) throw std::invalid_argument("sample_subset: m exceeds M");
  std::vector<std::uint32_t> pool(M);
  for (std::uint32_t i = 0; i < M; ++i) pool[i] = i;
  for (std::uint32_t i = 0; i < m; ++i) {
    const auto j = i + static_cast<std::uint32_t>(rng.next_below(M - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(m);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace rfi
