#pragma once

namespace nocs {

/// Tuning knobs for reconstruction. Defaults are the values tuned for
/// natural RGB images: 9x9 blocks, 44 stacked matches, and a 33x33 search
/// window.
struct NocsParams {
  int block_size = 9;
  int stack_size = 44;
  int search_radius = 16;
  /// Share of pending pixels processed per iteration, in (0, 1].
  double batch_fraction = 0.10;

  int window_extent() const noexcept { return 2 * search_radius + 1; }
};

/// Throws `Error(ErrorCode::invalid_params)` when a field is out of range or
/// the unclipped search window holds fewer than `stack_size` candidates.
void validate(const NocsParams& params);

}  // namespace nocs
