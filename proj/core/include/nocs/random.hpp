#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace nocs {

/// Identifier of the pseudo-random algorithm behind every seeded output.
/// Any implementation reproducing it (64-bit Mersenne twister, bounded
/// draws by rejection, sub-seeds by splitmix64) regenerates identical masks.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64+rejection+splitmix64/v1";

/// Seeded generator with platform-independent bounded draws. The standard
/// distributions are implementation-defined, so they are not used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform integer in [lo, hi].
  int between(int lo, int hi);

  /// Uniform double in [0, 1) from the top 53 bits.
  double unit();

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer, used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t value) noexcept;

}  // namespace nocs
