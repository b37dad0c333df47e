#include "nocs/masks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "nocs/random.hpp"

namespace nocs {

namespace {

struct Region {
  int x0, y0, width, height;
};

struct Span {
  int begin, end;
};

// Cells of a jittered grid with real-valued pitch covering [0, length).
std::vector<Span> grid_cells(int length, double pitch) {
  std::vector<Span> cells;
  for (int i = 0;; ++i) {
    const int b = static_cast<int>(std::floor(i * pitch));
    if (b >= length) break;
    const int e = std::min(length, static_cast<int>(std::floor((i + 1) * pitch)));
    if (e > b) cells.push_back({b, e});
  }
  return cells;
}

// Places a segment of up to `extent` pixels inside a cell, keeping the last
// pixel of the cell free so shapes in adjacent cells never touch.
std::optional<Span> place(Rng& rng, Span cell, int extent) {
  const int room = cell.end - cell.begin - 1;
  const int size = std::min(extent, room);
  if (size <= 0) return std::nullopt;
  const int offset = rng.between(0, room - size);
  return Span{cell.begin + offset, cell.begin + offset + size};
}

void fill(Mask& mask, const Region& r, Span xs, Span ys, std::uint8_t value) {
  for (int y = ys.begin; y < ys.end; ++y) {
    for (int x = xs.begin; x < xs.end; ++x) mask(r.x0 + x, r.y0 + y) = value;
  }
}

void rect_loss(Mask& mask, const Region& r, double density, int e, Rng& rng) {
  const double pitch = std::max(e / std::sqrt(density), e + 1.0);
  const auto cols = grid_cells(r.width, pitch);
  for (const Span row : grid_cells(r.height, pitch)) {
    for (const Span col : cols) {
      const auto ys = place(rng, row, e);
      const auto xs = place(rng, col, e);
      if (xs && ys) fill(mask, r, *xs, *ys, 0);
    }
  }
}

void hbar_loss(Mask& mask, const Region& r, double density, int e, Rng& rng) {
  const double pitch = std::max(e / density, e + 1.0);
  for (const Span row : grid_cells(r.height, pitch)) {
    if (const auto ys = place(rng, row, e)) fill(mask, r, {0, r.width}, *ys, 0);
  }
}

// Squares, horizontal bars (3e x e) and vertical bars (e x 3e), equally
// likely, stamped at uniform positions until the masked count reaches the
// target. Shapes may overlap and may be clipped by the region border.
void mixed_loss(Mask& mask, const Region& r, double density, int e, Rng& rng) {
  const long long area = static_cast<long long>(r.width) * r.height;
  const auto target = std::max(
      1LL, static_cast<long long>(std::llround(density * static_cast<double>(area))));
  long long missing = 0;
  while (missing < target) {
    const auto shape = rng.below(3);
    const int w = shape == 1 ? 3 * e : e;
    const int h = shape == 2 ? 3 * e : e;
    const int x = rng.between(1 - w, r.width - 1);
    const int y = rng.between(1 - h, r.height - 1);
    for (int yy = std::max(0, y); yy < std::min(r.height, y + h); ++yy) {
      for (int xx = std::max(0, x); xx < std::min(r.width, x + w); ++xx) {
        auto& flag = mask(r.x0 + xx, r.y0 + yy);
        if (flag != 0) {
          flag = 0;
          ++missing;
        }
      }
    }
  }
}

void random_unmask(Mask& mask, const Region& r, double density, int e, Rng& rng) {
  fill(mask, r, {0, r.width}, {0, r.height}, 0);
  const long long area = static_cast<long long>(r.width) * r.height;
  const auto target = static_cast<long long>(std::llround(density * static_cast<double>(area)));
  long long missing = area;
  while (missing > target) {
    const int w = rng.between(e, 4 * e);
    const int h = rng.between(e, 4 * e);
    const int x = rng.between(1 - w, r.width - 1);
    const int y = rng.between(1 - h, r.height - 1);
    for (int yy = std::max(0, y); yy < std::min(r.height, y + h); ++yy) {
      for (int xx = std::max(0, x); xx < std::min(r.width, x + w); ++xx) {
        auto& flag = mask(r.x0 + xx, r.y0 + yy);
        if (flag == 0) {
          flag = 1;
          --missing;
        }
      }
    }
  }
}

void generate_region(Mask& mask, const Region& r, MaskPattern pattern, double density, int e,
                     std::uint64_t seed) {
  if (r.width <= 0 || r.height <= 0) return;
  Rng rng(seed);
  switch (pattern) {
    case MaskPattern::rect_loss: rect_loss(mask, r, density, e, rng); break;
    case MaskPattern::hbar_loss: hbar_loss(mask, r, density, e, rng); break;
    case MaskPattern::mixed_loss: mixed_loss(mask, r, density, e, rng); break;
    case MaskPattern::random_unmask: random_unmask(mask, r, density, e, rng); break;
    case MaskPattern::four_quadrant: break;
  }
}

constexpr std::array<std::pair<MaskPattern, std::string_view>, 5> kPatternNames{{
    {MaskPattern::rect_loss, "rect_loss"},
    {MaskPattern::hbar_loss, "hbar_loss"},
    {MaskPattern::mixed_loss, "mixed_loss"},
    {MaskPattern::random_unmask, "random_unmask"},
    {MaskPattern::four_quadrant, "four_quadrant"},
}};

}  // namespace

std::string_view to_string(MaskPattern pattern) noexcept {
  for (const auto& [p, name] : kPatternNames) {
    if (p == pattern) return name;
  }
  return "unknown";
}

std::optional<MaskPattern> parse_mask_pattern(std::string_view name) noexcept {
  for (const auto& [p, n] : kPatternNames) {
    if (n == name) return p;
  }
  return std::nullopt;
}

int default_element_size(int width, int height) noexcept {
  const int side = std::min(width, height);
  return std::max(1, static_cast<int>(std::lround(12.0 * side / 1200.0)));
}

Mask generate_mask(const MaskSpec& spec) {
  if (spec.width < 1 || spec.height < 1) {
    throw Error(ErrorCode::invalid_params, "mask dimensions must be positive");
  }
  if (!(spec.density > 0.0 && spec.density < 1.0)) {
    throw Error(ErrorCode::invalid_params, "mask density must lie in (0, 1)");
  }
  if (spec.element_size < 1) {
    throw Error(ErrorCode::invalid_params, "mask element size must be >= 1");
  }

  Mask mask(spec.width, spec.height, 1);
  if (spec.pattern == MaskPattern::four_quadrant) {
    const int left = spec.width / 2;
    const int top = spec.height / 2;
    const std::array<std::pair<Region, MaskPattern>, 4> quadrants{{
        {{0, 0, left, top}, MaskPattern::rect_loss},
        {{left, 0, spec.width - left, top}, MaskPattern::hbar_loss},
        {{0, top, left, spec.height - top}, MaskPattern::mixed_loss},
        {{left, top, spec.width - left, spec.height - top}, MaskPattern::random_unmask},
    }};
    for (std::size_t q = 0; q < quadrants.size(); ++q) {
      const auto& [region, pattern] = quadrants[q];
      generate_region(mask, region, pattern, spec.density, spec.element_size,
                      mix_seed(spec.seed + q));
    }
  } else {
    generate_region(mask, {0, 0, spec.width, spec.height}, spec.pattern, spec.density,
                    spec.element_size, mix_seed(spec.seed));
  }

  if (count_valid(mask) == 0) {
    throw Error(ErrorCode::fully_masked, "generated mask has no valid pixels");
  }
  return mask;
}

std::string describe(const MaskSpec& spec) {
  std::ostringstream out;
  out << "pattern=" << to_string(spec.pattern) << " size=" << spec.width << "x" << spec.height
      << " density=" << spec.density << " element_size=" << spec.element_size
      << " seed=" << spec.seed << " rng=" << kRngAlgorithm;
  return out.str();
}

}  // namespace nocs
