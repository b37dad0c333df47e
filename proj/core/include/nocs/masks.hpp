#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "nocs/image.hpp"

namespace nocs {

enum class MaskPattern {
  /// Jittered grid of square holes.
  rect_loss,
  /// Full-width horizontal stripes.
  hbar_loss,
  /// Jittered grid of squares, horizontal and vertical bars.
  mixed_loss,
  /// Everything missing except randomly placed, overlapping rectangles.
  random_unmask,
  /// 2x2 layout: rect_loss, hbar_loss / mixed_loss, random_unmask.
  four_quadrant,
};

std::string_view to_string(MaskPattern pattern) noexcept;
std::optional<MaskPattern> parse_mask_pattern(std::string_view name) noexcept;

struct MaskSpec {
  int width = 0;
  int height = 0;
  MaskPattern pattern = MaskPattern::four_quadrant;
  /// Target fraction of missing pixels, in (0, 1).
  double density = 0.15;
  /// Hole side length / bar thickness in pixels.
  int element_size = 12;
  std::uint64_t seed = 0;
};

/// 12 px at 1200x1200, scaled with the shorter image side, at least 1.
int default_element_size(int width, int height) noexcept;

/// Deterministic in `spec`. Throws `invalid_params` for a bad spec and
/// `fully_masked` if the result has no valid pixel.
Mask generate_mask(const MaskSpec& spec);

/// One-line description of `spec` plus the RNG identifier, for embedding in
/// exported mask files.
std::string describe(const MaskSpec& spec);

}  // namespace nocs
