#pragma once

#include <cmath>
#include <cstdint>

#include "nocs/image.hpp"
#include "nocs/random.hpp"

namespace nocs::bench {

inline Channel textured(int w, int h, std::uint64_t seed) {
  Rng rng(seed);
  Channel c(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      c(x, y) = 128.0 + 80.0 * std::sin(0.2 * x) * std::cos(0.13 * y) + 8.0 * rng.unit();
  return c;
}

}  // namespace nocs::bench
