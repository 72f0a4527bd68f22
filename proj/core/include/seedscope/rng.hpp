#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace seedscope {

/// Distinguishes independent random streams drawn for the same replicate.
enum class StreamPurpose : std::uint64_t {
  bootstrap = 1,
  training = 2,
  shuffle = 3,
  generation = 4,
  sampling = 5,
};

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seeded generator with platform-independent integer and real draws.
///
/// Only the engine (std::mt19937_64, whose output sequence is fixed by the
/// standard) is taken from the library; the distributions are implemented here
/// so a given seed produces the same draws with every standard library.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Stream for (base seed, replicate, purpose). Streams for different
  /// replicates are unrelated, so replicates can be generated in any order.
  static Rng stream(std::uint64_t base_seed, std::uint64_t replicate,
                    StreamPurpose purpose);

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }
  result_type operator()() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace seedscope
