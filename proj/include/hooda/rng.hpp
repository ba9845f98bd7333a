#pragma once

#include <cstdint>

namespace hooda {

// SplitMix64 finalizer. Used both as the stream function and for seed derivation.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ull;

// Derives the seed for sub-stream `index` of `base`. Counter-based, so streams
// for different indices can be created independently and in parallel.
constexpr std::uint64_t split_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return mix64(base + kGolden64 * (index + 1));
}

// Counter-based generator: output i is mix64(key ^ (i * golden)). The entire
// state is two words, it is trivially copyable, and the stream is identical on
// every platform. std::random distributions are implementation-defined, so all
// sampling helpers live here.
class Rng {
public:
  Rng() = default;
  explicit Rng(std::uint64_t seed) : key_(mix64(seed ^ 0x6A09E667F3BCC909ull)) {}

  std::uint64_t next_u64() noexcept {
    counter_ += kGolden64;
    return mix64(key_ ^ counter_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * next_double(); }

  // Uniform in [0, n). n == 0 returns 0. Lemire multiply-shift; bias < 2^-64.
  std::uint64_t uniform_int(std::uint64_t n) noexcept {
    if (n == 0) return 0;
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  bool bernoulli(double p) noexcept { return next_double() < p; }

  // Independent child stream; does not advance this stream.
  Rng fork(std::uint64_t tag) const noexcept {
    Rng child;
    child.key_ = mix64(key_ ^ mix64(tag + 0x1234u));
    return child;
  }

  friend bool operator==(const Rng&, const Rng&) = default;

private:
  std::uint64_t key_ = mix64(0x6A09E667F3BCC909ull);
  std::uint64_t counter_ = 0;
};

}  // namespace hooda
