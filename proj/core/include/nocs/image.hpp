#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nocs/error.hpp"

namespace nocs {

/// Pixel coordinate. `x` is the column, `y` the row.
struct Point {
  int x = 0;
  int y = 0;

  friend bool operator==(const Point&, const Point&) = default;

  /// Row-major ordering: by row first, then column.
  friend std::strong_ordering operator<=>(const Point& a, const Point& b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

/// Dense row-major 2-D plane.
template <typename T>
class Plane {
 public:
  using value_type = T;

  Plane() = default;

  Plane(int width, int height, T fill = T{}) : width_(width), height_(height) {
    check_size(width, height);
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  Plane(int width, int height, std::vector<T> values)
      : width_(width), height_(height), data_(std::move(values)) {
    check_size(width, height);
    if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      throw Error(ErrorCode::dimension_mismatch,
                  "plane data holds " + std::to_string(data_.size()) + " values, expected " +
                      std::to_string(static_cast<std::size_t>(width) * height));
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  bool contains(Point p) const noexcept {
    return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_;
  }

  std::size_t index(Point p) const noexcept {
    return static_cast<std::size_t>(p.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(p.x);
  }

  Point point(std::size_t index) const noexcept {
    return Point{static_cast<int>(index % static_cast<std::size_t>(width_)),
                 static_cast<int>(index / static_cast<std::size_t>(width_))};
  }

  T operator()(int x, int y) const noexcept { return data_[index({x, y})]; }
  T& operator()(int x, int y) noexcept { return data_[index({x, y})]; }
  T operator[](Point p) const noexcept { return data_[index(p)]; }
  T& operator[](Point p) noexcept { return data_[index(p)]; }

  /// Clamp-to-edge read.
  T clamped(int x, int y) const noexcept {
    return (*this)(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1));
  }

  std::span<const T> values() const noexcept { return data_; }
  std::span<T> values() noexcept { return data_; }

  template <typename U>
  bool same_shape(const Plane<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  static void check_size(int width, int height) {
    if (width < 1 || height < 1) {
      throw Error(ErrorCode::invalid_value, "plane dimensions must be positive, got " +
                                                std::to_string(width) + "x" +
                                                std::to_string(height));
    }
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// One scalar image plane, nominally in [0, 255].
using Channel = Plane<double>;

/// Validity flags for the distorted channel: 1 = available, 0 = missing.
using Mask = Plane<std::uint8_t>;

/// Throws if any value is non-finite.
void validate_channel(const Channel& channel);

/// Throws if any flag is not exactly 0 or 1.
void validate_mask(const Mask& mask);

std::size_t count_valid(const Mask& mask);

/// Element-wise product of `clean` and `mask`.
Channel apply_mask(const Channel& clean, const Mask& mask);

/// Distorted channel, its mask and the fully available reference channels.
/// Instances only exist in a validated state.
class ReconstructionProblem {
 public:
  const Channel& distorted() const noexcept { return distorted_; }
  const Mask& mask() const noexcept { return mask_; }
  std::span<const Channel> references() const noexcept { return references_; }
  std::size_t reference_count() const noexcept { return references_.size(); }
  int width() const noexcept { return distorted_.width(); }
  int height() const noexcept { return distorted_.height(); }

  friend ReconstructionProblem make_problem(Channel distorted, Mask mask,
                                            std::vector<Channel> references);

 private:
  ReconstructionProblem(Channel distorted, Mask mask, std::vector<Channel> references)
      : distorted_(std::move(distorted)), mask_(std::move(mask)),
        references_(std::move(references)) {}

  Channel distorted_;
  Mask mask_;
  std::vector<Channel> references_;
};

/// Validates and bundles a problem. Throws `Error` with
/// `dimension_mismatch`, `empty_references`, `fully_masked`, or
/// `invalid_value`.
ReconstructionProblem make_problem(Channel distorted, Mask mask, std::vector<Channel> references);

}  // namespace nocs
