#include "nocs/regression.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nocs {

namespace {

void check_shape(const Bar& bar) {
  for (const auto& row : bar.references) {
    if (row.size() != bar.values.size()) {
      throw Error(ErrorCode::dimension_mismatch, "reference bar length differs from value bar");
    }
  }
  if (bar.valid.size() != bar.values.size()) {
    throw Error(ErrorCode::dimension_mismatch, "validity bar length differs from value bar");
  }
}

void check_reference(const Bar& bar, std::size_t reference) {
  if (reference >= bar.references.size()) {
    throw Error(ErrorCode::out_of_bounds, "reference index " + std::to_string(reference) +
                                              " out of range for " +
                                              std::to_string(bar.references.size()) +
                                              " channels");
  }
}

double valid_mean(const std::vector<double>& v, const std::vector<std::uint8_t>& valid,
                  std::size_t n) {
  double sum = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (valid[k]) sum += v[k];
  }
  return sum / static_cast<double>(n);
}

}  // namespace

std::size_t Bar::valid_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(valid.begin(), valid.end(),
                                                [](std::uint8_t f) { return f != 0; }));
}

double valid_correlation(const Bar& bar, std::size_t reference) {
  check_shape(bar);
  check_reference(bar, reference);
  const std::size_t n = bar.valid_count();
  if (n == 0) return 0.0;
  const auto& row = bar.references[reference];
  const double m_mean = valid_mean(bar.values, bar.valid, n);
  const double r_mean = valid_mean(row, bar.valid, n);
  double cross = 0.0;
  double m_sq = 0.0;
  double r_sq = 0.0;
  for (std::size_t k = 0; k < bar.values.size(); ++k) {
    if (!bar.valid[k]) continue;
    const double dm = bar.values[k] - m_mean;
    const double dr = row[k] - r_mean;
    cross += dm * dr;
    m_sq += dm * dm;
    r_sq += dr * dr;
  }
  if (m_sq == 0.0 || r_sq == 0.0) return 0.0;
  return cross / (std::sqrt(m_sq) * std::sqrt(r_sq));
}

std::size_t select_reference(const Bar& bar) {
  check_shape(bar);
  if (bar.references.size() == 1) return 0;
  if (bar.references.empty()) {
    throw Error(ErrorCode::empty_references, "bar has no reference rows");
  }
  if (bar.valid_count() < 2) {
    throw Error(ErrorCode::underdetermined,
                "reference selection needs at least 2 valid entries");
  }
  std::size_t best = 0;
  double best_score = valid_correlation(bar, 0);
  for (std::size_t i = 1; i < bar.references.size(); ++i) {
    const double score = valid_correlation(bar, i);
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

AffineFit fit_affine(const Bar& bar, std::size_t reference) {
  check_shape(bar);
  check_reference(bar, reference);
  const std::size_t n = bar.valid_count();
  if (n == 0) {
    throw Error(ErrorCode::empty_bar, "cannot fit a bar without valid entries");
  }
  const auto& row = bar.references[reference];
  const double m_mean = valid_mean(bar.values, bar.valid, n);
  const double r_mean = valid_mean(row, bar.valid, n);
  double cross = 0.0;
  double r_sq = 0.0;
  for (std::size_t k = 0; k < bar.values.size(); ++k) {
    if (!bar.valid[k]) continue;
    const double dr = row[k] - r_mean;
    cross += dr * (bar.values[k] - m_mean);
    r_sq += dr * dr;
  }
  AffineFit fit;
  fit.reference = reference;
  if (r_sq == 0.0) {
    fit.slope = 0.0;
    fit.intercept = m_mean;
  } else {
    fit.slope = cross / r_sq;
    fit.intercept = m_mean - fit.slope * r_mean;
  }
  return fit;
}

double predict_pixel(const Bar& bar, const AffineFit& fit) {
  check_reference(bar, fit.reference);
  const auto& row = bar.references[fit.reference];
  if (row.empty()) {
    throw Error(ErrorCode::empty_bar, "cannot predict from an empty bar");
  }
  return fit.slope * row.front() + fit.intercept;
}

}  // namespace nocs
