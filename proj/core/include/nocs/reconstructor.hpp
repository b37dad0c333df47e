#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "nocs/image.hpp"
#include "nocs/params.hpp"
#include "nocs/regression.hpp"

namespace nocs {

/// Called after every outer iteration with the 1-based iteration index and
/// the number of pixels still missing.
using ProgressCallback = std::function<void(std::size_t iteration, std::size_t remaining)>;

struct ReconstructionOptions {
  /// Worker threads for match precomputation and batch estimation.
  /// 0 selects the OpenMP default.
  int workers = 0;
  ProgressCallback progress;
};

struct ReconstructionStats {
  std::size_t iterations = 0;
  std::size_t batches = 0;
  std::size_t regression_pixels = 0;
  std::size_t emergency_steps = 0;
  /// Batches that left at least one zero-valid bar behind.
  std::size_t deferral_batches = 0;
};

/// Output of `ReconstructionState::schedule_batch`.
struct BatchPlan {
  /// Pixels to estimate this round, most valid matches first.
  std::vector<Point> pixels;
  /// True when every pending bar is zero-valid; `pixels` is then empty.
  bool emergency = false;
  /// Pending bars without any valid entry, skipped this round.
  std::size_t zero_valid = 0;
};

/// Batch rule on bare valid-match counts (indexed in row-major pixel
/// order): the first ceil(fraction * n) positions by descending count, ties
/// by position, zero counts dropped. `emergency` is set when every count is
/// zero.
struct BatchSelection {
  std::vector<std::size_t> positions;
  bool emergency = false;
  std::size_t zero_valid = 0;
};

BatchSelection select_batch(std::span<const std::size_t> valid_counts, double fraction);

/// Neighbor steps tried by the emergency fallback, in tie-break order.
inline constexpr std::array<Point, 4> kNeighborSteps{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};

/// Masked pixels touching at least one valid 4-neighbor, row-major, with the
/// steps (subset of `kNeighborSteps`, same order) that land on valid pixels.
struct EmergencyCandidates {
  std::vector<Point> pixels;
  std::vector<std::vector<Point>> steps;
};

/// Mutable working copy of a problem. Block matches for every originally
/// masked pixel are computed once at construction; they depend only on the
/// reference channels and therefore never change.
class ReconstructionState {
 public:
  ReconstructionState(const ReconstructionProblem& problem, const NocsParams& params,
                      int workers = 0);

  const Channel& distorted() const noexcept { return distorted_; }
  const Mask& mask() const noexcept { return mask_; }
  std::span<const Channel> references() const noexcept { return references_; }
  const NocsParams& params() const noexcept { return params_; }

  /// Still-masked pixels in row-major order.
  const std::vector<Point>& pending() const noexcept { return pending_; }
  bool done() const noexcept { return pending_.empty(); }

  /// Cached match locations for an originally masked pixel, target first.
  std::vector<Point> matches(Point x) const;

  /// Bar for pending pixel `x` built from the current state.
  Bar build_bar(Point x) const;

  /// Number of currently valid matched locations of `x`.
  std::size_t valid_matches(Point x) const;

  /// Picks the next ceil(fraction * |pending|) pending pixels by descending
  /// valid-match count (row-major among equals), leaving out zero-valid
  /// bars.
  BatchPlan schedule_batch(double fraction) const;

  /// Writes estimated values and marks the pixels valid. Every pixel must be
  /// pending.
  void commit(std::span<const Point> pixels, std::span<const double> values);

  EmergencyCandidates emergency_candidates() const;

  /// Copies the distorted value across the (masked, valid) neighbor pair with
  /// the smallest squared reference difference, marks that pixel valid and
  /// returns it.
  Point emergency_step();

 private:
  const std::uint32_t* match_row(Point x) const;

  NocsParams params_;
  Channel distorted_;
  Mask mask_;
  std::vector<Channel> references_;
  std::vector<Point> pending_;
  std::vector<std::int32_t> slot_;
  std::vector<std::uint32_t> match_table_;
};

/// Estimate for the target of `bar`: best-correlated reference, affine fit,
/// prediction. Bars with fewer than two valid entries skip the selection
/// and use reference 0.
double estimate_target(const Bar& bar);

struct ReconstructionResult {
  Channel channel;
  ReconstructionStats stats;
};

/// Fills every masked pixel of `problem`. Batches are evaluated against the
/// state at batch start and written back together, so the output does not
/// depend on the worker count.
ReconstructionResult reconstruct_with_stats(const ReconstructionProblem& problem,
                                            const NocsParams& params,
                                            const ReconstructionOptions& options = {});

Channel reconstruct(const ReconstructionProblem& problem, const NocsParams& params,
                    const ReconstructionOptions& options = {});

}  // namespace nocs
