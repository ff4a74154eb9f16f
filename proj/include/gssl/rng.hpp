#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace gssl {

// Counter-based generator: the i-th output of a stream is mix(key, i). A
// stream is identified by its 64-bit key, so child streams are obtained by
// hashing (key, tag) and never share state with the parent. Outputs depend
// only on (key, counter), which makes every draw replayable.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed) : key_(mix(seed ^ kStreamSalt)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + (counter_++) * kGolden); }

  // Independent substream; split(a) and split(b) never overlap for a != b.
  CounterRng split(std::uint64_t tag) const {
    CounterRng child(0);
    child.key_ = mix(key_ ^ mix(tag + kGolden));
    return child;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform double in (0, 1]; safe to feed into log().
  double uniform_open_zero() { return 1.0 - uniform(); }

  // Standard normal via Box-Muller; the spare variate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open_zero()));
    const double phi = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kStreamSalt = 0x6a09e667f3bcc909ULL;

  // SplitMix64 finalizer.
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Seed for repetition `index` of stream `stream` under `base_seed`. Depends
// only on its arguments, so repetitions can run in any order.
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t stream,
                                 std::uint64_t index) {
  CounterRng root(base_seed);
  return root.split(stream).split(index)();
}

}  // namespace gssl
