#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nocs/image.hpp"

namespace nocs {

/// Values gathered at the matched locations of one target pixel. Slot 0 is
/// the target itself.
struct Bar {
  Point target;
  /// Distorted-channel values.
  std::vector<double> values;
  /// Mask flags at the same locations.
  std::vector<std::uint8_t> valid;
  /// One row per reference channel, same length as `values`.
  std::vector<std::vector<double>> references;

  std::size_t size() const noexcept { return values.size(); }
  std::size_t channel_count() const noexcept { return references.size(); }
  std::size_t valid_count() const noexcept;
};

/// m = slope * reference + intercept, fitted on one reference channel.
struct AffineFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t reference = 0;
};

/// Index (0-based) of the reference row whose valid entries correlate best
/// with the valid distorted values. With a single reference returns 0
/// without looking at the data. Zero-variance rows score 0; ties go to the
/// lowest index. Throws `underdetermined` with fewer than 2 valid entries.
std::size_t select_reference(const Bar& bar);

/// Closed-form least-squares fit of the valid values against reference row
/// `reference`. A zero denominator (constant reference or a single valid
/// entry) yields slope 0 and intercept equal to the valid mean. Throws
/// `empty_bar` when no entry is valid.
AffineFit fit_affine(const Bar& bar, std::size_t reference);

/// slope * references[fit.reference][0] + intercept. Not clamped.
double predict_pixel(const Bar& bar, const AffineFit& fit);

/// Pearson correlation over the valid entries, 0 for zero variance.
double valid_correlation(const Bar& bar, std::size_t reference);

}  // namespace nocs
