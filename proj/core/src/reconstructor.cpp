#include "nocs/reconstructor.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "nocs/block_matching.hpp"

namespace nocs {

namespace {

int resolve_workers(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

// ceil(fraction * n), at least 1. Products that land within rounding noise
// of an integer (0.1 * 30 = 3.0000000000000004) count as that integer.
std::size_t batch_size(double fraction, std::size_t n) {
  const double exact = fraction * static_cast<double>(n);
  const double nearest = std::round(exact);
  const double size =
      std::abs(exact - nearest) <= 1e-9 * std::max(1.0, exact) ? nearest : std::ceil(exact);
  return std::clamp<std::size_t>(static_cast<std::size_t>(size), 1, n);
}

}  // namespace

ReconstructionState::ReconstructionState(const ReconstructionProblem& problem,
                                         const NocsParams& params, int workers)
    : params_(params),
      distorted_(problem.distorted()),
      mask_(problem.mask()),
      references_(problem.references().begin(), problem.references().end()) {
  validate(params_);
  const int w = distorted_.width();
  const int h = distorted_.height();
  const long long min_window = static_cast<long long>(std::min(w, params_.search_radius + 1)) *
                               std::min(h, params_.search_radius + 1);
  if (min_window < params_.stack_size) {
    throw Error(ErrorCode::window_too_small,
                "window too small: corner windows of a " + std::to_string(w) + "x" +
                    std::to_string(h) + " image hold " + std::to_string(min_window) +
                    " candidates, stack size is " + std::to_string(params_.stack_size));
  }

  slot_.assign(mask_.size(), -1);
  for (std::size_t i = 0; i < mask_.size(); ++i) {
    if (mask_.values()[i] == 0) {
      slot_[i] = static_cast<std::int32_t>(pending_.size());
      pending_.push_back(mask_.point(i));
    }
  }

  const auto k = static_cast<std::size_t>(params_.stack_size);
  match_table_.resize(pending_.size() * k);
  if (pending_.empty()) return;

  const BlockMatcher matcher(references_, params_);
  const auto count = static_cast<std::ptrdiff_t>(pending_.size());
#pragma omp parallel for num_threads(resolve_workers(workers)) schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto list = matcher.match(pending_[static_cast<std::size_t>(i)]);
    auto* row = match_table_.data() + static_cast<std::size_t>(i) * k;
    for (std::size_t j = 0; j < k; ++j) {
      row[j] = static_cast<std::uint32_t>(mask_.index(list.locations[j]));
    }
  }
}

const std::uint32_t* ReconstructionState::match_row(Point x) const {
  if (!mask_.contains(x) || slot_[mask_.index(x)] < 0) {
    throw Error(ErrorCode::out_of_bounds, "(" + std::to_string(x.x) + ", " +
                                              std::to_string(x.y) +
                                              ") was not masked in the original problem");
  }
  return match_table_.data() +
         static_cast<std::size_t>(slot_[mask_.index(x)]) * static_cast<std::size_t>(params_.stack_size);
}

std::vector<Point> ReconstructionState::matches(Point x) const {
  const auto* row = match_row(x);
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(params_.stack_size));
  for (int j = 0; j < params_.stack_size; ++j) out.push_back(mask_.point(row[j]));
  return out;
}

Bar ReconstructionState::build_bar(Point x) const {
  const auto* row = match_row(x);
  const auto k = static_cast<std::size_t>(params_.stack_size);
  Bar bar;
  bar.target = x;
  bar.values.resize(k);
  bar.valid.resize(k);
  bar.references.assign(references_.size(), std::vector<double>(k));
  const auto d = distorted_.values();
  const auto m = mask_.values();
  for (std::size_t j = 0; j < k; ++j) {
    const auto idx = row[j];
    bar.values[j] = d[idx];
    bar.valid[j] = m[idx];
    for (std::size_t i = 0; i < references_.size(); ++i) {
      bar.references[i][j] = references_[i].values()[idx];
    }
  }
  return bar;
}

std::size_t ReconstructionState::valid_matches(Point x) const {
  const auto* row = match_row(x);
  const auto m = mask_.values();
  std::size_t n = 0;
  for (int j = 0; j < params_.stack_size; ++j) n += m[row[j]];
  return n;
}

BatchSelection select_batch(std::span<const std::size_t> valid_counts, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::invalid_params, "batch fraction must lie in (0, 1]");
  }
  BatchSelection out;
  if (valid_counts.empty()) return out;
  out.zero_valid = static_cast<std::size_t>(
      std::count(valid_counts.begin(), valid_counts.end(), std::size_t{0}));
  if (out.zero_valid == valid_counts.size()) {
    out.emergency = true;
    return out;
  }
  std::vector<std::size_t> order(valid_counts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return valid_counts[a] > valid_counts[b];
  });
  const auto take = batch_size(fraction, valid_counts.size());
  for (std::size_t i = 0; i < take && valid_counts[order[i]] > 0; ++i) {
    out.positions.push_back(order[i]);
  }
  return out;
}

BatchPlan ReconstructionState::schedule_batch(double fraction) const {
  std::vector<std::size_t> counts;
  counts.reserve(pending_.size());
  for (const Point p : pending_) counts.push_back(valid_matches(p));
  const auto selection = select_batch(counts, fraction);
  BatchPlan plan;
  plan.emergency = selection.emergency;
  plan.zero_valid = selection.zero_valid;
  plan.pixels.reserve(selection.positions.size());
  for (const auto i : selection.positions) plan.pixels.push_back(pending_[i]);
  return plan;
}

void ReconstructionState::commit(std::span<const Point> pixels, std::span<const double> values) {
  if (pixels.size() != values.size()) {
    throw Error(ErrorCode::dimension_mismatch, "commit needs one value per pixel");
  }
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const Point p = pixels[i];
    if (!mask_.contains(p) || mask_[p] != 0) {
      throw std::logic_error("commit to a pixel that is not pending");
    }
    distorted_[p] = values[i];
    mask_[p] = 1;
  }
  std::erase_if(pending_, [this](Point p) { return mask_[p] != 0; });
}

EmergencyCandidates ReconstructionState::emergency_candidates() const {
  EmergencyCandidates out;
  for (const Point y : pending_) {
    std::vector<Point> steps;
    for (const Point n : kNeighborSteps) {
      const Point q{y.x + n.x, y.y + n.y};
      if (mask_.contains(q) && mask_[q] == 1) steps.push_back(n);
    }
    if (!steps.empty()) {
      out.pixels.push_back(y);
      out.steps.push_back(std::move(steps));
    }
  }
  return out;
}

Point ReconstructionState::emergency_step() {
  const auto candidates = emergency_candidates();
  if (candidates.pixels.empty()) {
    throw std::logic_error("emergency step without a masked pixel next to a valid one");
  }
  double best = std::numeric_limits<double>::infinity();
  Point best_pixel{};
  Point best_step{};
  for (std::size_t c = 0; c < candidates.pixels.size(); ++c) {
    const Point y = candidates.pixels[c];
    for (const Point n : candidates.steps[c]) {
      const Point q{y.x + n.x, y.y + n.y};
      double cost = 0.0;
      for (const auto& ref : references_) {
        const double d = ref[y] - ref[q];
        cost += d * d;
      }
      if (cost < best) {
        best = cost;
        best_pixel = y;
        best_step = n;
      }
    }
  }
  distorted_[best_pixel] = distorted_[{best_pixel.x + best_step.x, best_pixel.y + best_step.y}];
  mask_[best_pixel] = 1;
  std::erase(pending_, best_pixel);
  return best_pixel;
}

double estimate_target(const Bar& bar) {
  const std::size_t z =
      (bar.channel_count() > 1 && bar.valid_count() >= 2) ? select_reference(bar) : 0;
  return predict_pixel(bar, fit_affine(bar, z));
}

ReconstructionResult reconstruct_with_stats(const ReconstructionProblem& problem,
                                            const NocsParams& params,
                                            const ReconstructionOptions& options) {
  const int workers = resolve_workers(options.workers);
  ReconstructionState state(problem, params, workers);
  ReconstructionStats stats;
  std::vector<double> estimates;

  while (!state.done()) {
    ++stats.iterations;
    const auto plan = state.schedule_batch(params.batch_fraction);
    if (plan.emergency) {
      state.emergency_step();
      ++stats.emergency_steps;
    } else {
      const auto& pixels = plan.pixels;
      estimates.assign(pixels.size(), 0.0);
      const auto count = static_cast<std::ptrdiff_t>(pixels.size());
#pragma omp parallel for num_threads(workers) schedule(dynamic, 8)
      for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        estimates[idx] = estimate_target(state.build_bar(pixels[idx]));
      }
      state.commit(pixels, estimates);
      ++stats.batches;
      stats.regression_pixels += pixels.size();
      if (plan.zero_valid > 0) ++stats.deferral_batches;
    }
    if (options.progress) options.progress(stats.iterations, state.pending().size());
  }
  return {state.distorted(), stats};
}

Channel reconstruct(const ReconstructionProblem& problem, const NocsParams& params,
                    const ReconstructionOptions& options) {
  return reconstruct_with_stats(problem, params, options).channel;
}

}  // namespace nocs
