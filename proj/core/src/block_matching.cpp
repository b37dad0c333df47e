#include "nocs/block_matching.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

namespace nocs {

namespace {

int before_center(int block_size) { return (block_size - 1) / 2; }

void require_inside(const Channel& channel, Point p, const char* what) {
  if (!channel.contains(p)) {
    throw Error(ErrorCode::out_of_bounds, std::string(what) + " (" + std::to_string(p.x) + ", " +
                                              std::to_string(p.y) + ") lies outside the image");
  }
}

void require_consistent(std::span<const Channel> references) {
  if (references.empty()) {
    throw Error(ErrorCode::empty_references, "block matching needs at least one reference");
  }
  for (const auto& r : references) {
    if (!r.same_shape(references.front())) {
      throw Error(ErrorCode::dimension_mismatch, "reference channels differ in size");
    }
  }
}

}  // namespace

std::vector<double> extract_block(const Channel& channel, Point center, int block_size) {
  if (block_size < 1) {
    throw Error(ErrorCode::invalid_params, "block size must be >= 1");
  }
  require_inside(channel, center, "block center");
  const int lo = before_center(block_size);
  std::vector<double> block;
  block.reserve(static_cast<std::size_t>(block_size) * block_size);
  for (int dy = 0; dy < block_size; ++dy) {
    for (int dx = 0; dx < block_size; ++dx) {
      block.push_back(channel.clamped(center.x - lo + dx, center.y - lo + dy));
    }
  }
  return block;
}

double block_distance(std::span<const Channel> references, Point a, Point b, int block_size) {
  require_consistent(references);
  if (block_size < 1) {
    throw Error(ErrorCode::invalid_params, "block size must be >= 1");
  }
  require_inside(references.front(), a, "first coordinate");
  require_inside(references.front(), b, "second coordinate");
  const int lo = before_center(block_size);
  double total = 0.0;
  for (const auto& ref : references) {
    double ssd = 0.0;
    for (int dy = 0; dy < block_size; ++dy) {
      for (int dx = 0; dx < block_size; ++dx) {
        const double d = ref.clamped(a.x - lo + dx, a.y - lo + dy) -
                         ref.clamped(b.x - lo + dx, b.y - lo + dy);
        ssd += d * d;
      }
    }
    total += std::sqrt(ssd);
  }
  return total;
}

BlockMatcher::BlockMatcher(std::span<const Channel> references, const NocsParams& params)
    : params_(params) {
  validate(params_);
  require_consistent(references);
  width_ = references.front().width();
  height_ = references.front().height();
  const int s = params_.block_size;
  const int lo = before_center(s);
  padded_width_ = width_ + s - 1;
  padded_height_ = height_ + s - 1;
  padded_.reserve(references.size());
  for (const auto& ref : references) {
    std::vector<double> plane(static_cast<std::size_t>(padded_width_) * padded_height_);
    for (int y = 0; y < padded_height_; ++y) {
      for (int x = 0; x < padded_width_; ++x) {
        plane[static_cast<std::size_t>(y) * padded_width_ + x] = ref.clamped(x - lo, y - lo);
      }
    }
    padded_.push_back(std::move(plane));
  }
}

double BlockMatcher::distance(Point a, Point b) const noexcept {
  // Padded coordinates of a block's top-left corner equal the image
  // coordinates of its center.
  const int s = params_.block_size;
  const auto stride = static_cast<std::size_t>(padded_width_);
  double total = 0.0;
  for (const auto& plane : padded_) {
    const double* pa = plane.data() + static_cast<std::size_t>(a.y) * stride + a.x;
    const double* pb = plane.data() + static_cast<std::size_t>(b.y) * stride + b.x;
    double ssd = 0.0;
    for (int dy = 0; dy < s; ++dy) {
      for (int dx = 0; dx < s; ++dx) {
        const double d = pa[dx] - pb[dx];
        ssd += d * d;
      }
      pa += stride;
      pb += stride;
    }
    total += std::sqrt(ssd);
  }
  return total;
}

MatchList BlockMatcher::match(Point target) const {
  if (target.x < 0 || target.y < 0 || target.x >= width_ || target.y >= height_) {
    throw Error(ErrorCode::out_of_bounds, "match target (" + std::to_string(target.x) + ", " +
                                              std::to_string(target.y) +
                                              ") lies outside the image");
  }
  const int r = params_.search_radius;
  const int x0 = std::max(0, target.x - r);
  const int x1 = std::min(width_ - 1, target.x + r);
  const int y0 = std::max(0, target.y - r);
  const int y1 = std::min(height_ - 1, target.y + r);
  const auto window = static_cast<std::size_t>(x1 - x0 + 1) * static_cast<std::size_t>(y1 - y0 + 1);
  const auto k = static_cast<std::size_t>(params_.stack_size);
  if (window < k) {
    throw Error(ErrorCode::window_too_small,
                "window too small: " + std::to_string(window) + " candidates for a stack of " +
                    std::to_string(k));
  }

  // (distance, row-major rank in the window); the rank makes ties deterministic.
  std::vector<std::pair<double, std::uint32_t>> candidates;
  candidates.reserve(window - 1);
  const int window_width = x1 - x0 + 1;
  std::uint32_t rank = 0;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x, ++rank) {
      if (x == target.x && y == target.y) continue;
      candidates.emplace_back(distance(target, {x, y}), rank);
    }
  }
  const auto keep = static_cast<std::ptrdiff_t>(k - 1);
  std::partial_sort(candidates.begin(), candidates.begin() + keep, candidates.end());

  MatchList out;
  out.target = target;
  out.locations.reserve(k);
  out.distances.reserve(k);
  out.locations.push_back(target);
  out.distances.push_back(0.0);
  for (std::ptrdiff_t i = 0; i < keep; ++i) {
    const auto [d, idx] = candidates[static_cast<std::size_t>(i)];
    out.locations.push_back(
        {x0 + static_cast<int>(idx % window_width), y0 + static_cast<int>(idx / window_width)});
    out.distances.push_back(d);
  }
  return out;
}

MatchList match_blocks(std::span<const Channel> references, Point target,
                       const NocsParams& params) {
  return BlockMatcher(references, params).match(target);
}

}  // namespace nocs
