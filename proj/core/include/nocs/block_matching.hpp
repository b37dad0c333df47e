#pragma once

#include <span>
#include <vector>

#include "nocs/image.hpp"
#include "nocs/params.hpp"

namespace nocs {

/// The `stack_size` locations most similar to `target`, best first.
/// `locations.front() == target` and `distances.front() == 0` always hold.
struct MatchList {
  Point target;
  std::vector<Point> locations;
  std::vector<double> distances;

  std::size_t size() const noexcept { return locations.size(); }
};

/// S x S block around `center`, row-major. The block spans
/// [c - floor((S-1)/2), c + ceil((S-1)/2)] on each axis; samples outside the
/// image replicate the nearest edge pixel.
std::vector<double> extract_block(const Channel& channel, Point center, int block_size);

/// Sum over reference channels of the Euclidean norm of the block
/// difference between `a` and `b`. Only reference channels take part.
double block_distance(std::span<const Channel> references, Point a, Point b, int block_size);

/// Exhaustive block search over the (2r+1)^2 window around each target,
/// clipped to the image. Reference planes are padded once up front so the
/// inner loop is free of bounds checks. Immutable after construction and
/// safe to share across threads.
class BlockMatcher {
 public:
  BlockMatcher(std::span<const Channel> references, const NocsParams& params);

  /// Throws `window_too_small` if the clipped window around `target` holds
  /// fewer than `stack_size` candidates, `out_of_bounds` if `target` is
  /// outside the image.
  MatchList match(Point target) const;

  double distance(Point a, Point b) const noexcept;

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  const NocsParams& params() const noexcept { return params_; }

 private:
  NocsParams params_;
  int width_;
  int height_;
  int padded_width_;
  int padded_height_;
  std::vector<std::vector<double>> padded_;
};

/// Convenience wrapper over `BlockMatcher` for a single target. Ties are
/// broken by row-major position inside the window.
MatchList match_blocks(std::span<const Channel> references, Point target,
                       const NocsParams& params);

}  // namespace nocs
