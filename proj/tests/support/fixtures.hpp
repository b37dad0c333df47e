#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "nocs/image.hpp"
#include "nocs/random.hpp"

namespace nocs::testing {

inline Channel random_channel(int width, int height, std::uint64_t seed, double lo = 0.0,
                              double hi = 255.0) {
  Rng rng(seed);
  Channel c(width, height);
  for (auto& v : c.values()) v = lo + (hi - lo) * rng.unit();
  return c;
}

/// Integer-valued channel in [0, 255].
inline Channel random_byte_channel(int width, int height, std::uint64_t seed) {
  Rng rng(seed);
  Channel c(width, height);
  for (auto& v : c.values()) v = static_cast<double>(rng.below(256));
  return c;
}

/// Smooth structured channel (sum of sinusoids plus mild noise), closer to
/// natural image statistics than white noise.
inline Channel textured_channel(int width, int height, std::uint64_t seed) {
  Rng rng(seed);
  const double fx = 0.15 + 0.2 * rng.unit();
  const double fy = 0.1 + 0.2 * rng.unit();
  const double phase = 6.28 * rng.unit();
  Channel c(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double v = 128.0 + 70.0 * std::sin(fx * x + phase) * std::cos(fy * y) +
                       40.0 * std::sin(0.05 * (x + 2 * y)) + 10.0 * (rng.unit() - 0.5);
      c(x, y) = std::clamp(v, 0.0, 255.0);
    }
  }
  return c;
}

/// Each pixel missing with probability `fraction`; at least one stays valid.
inline Mask random_mask(int width, int height, double fraction, std::uint64_t seed) {
  Rng rng(seed);
  Mask m(width, height, 1);
  for (auto& f : m.values()) f = rng.unit() < fraction ? 0 : 1;
  if (count_valid(m) == 0) m.values()[rng.below(m.size())] = 1;
  return m;
}

inline Channel affine_of(const Channel& src, double slope, double intercept) {
  Channel out(src.width(), src.height());
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] = slope * src.values()[i] + intercept;
  return out;
}

}  // namespace nocs::testing
