#include "nocs/image.hpp"

#include <numeric>

namespace nocs {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
    case ErrorCode::empty_references: return "empty reference list";
    case ErrorCode::fully_masked: return "fully masked";
    case ErrorCode::invalid_value: return "invalid value";
    case ErrorCode::out_of_bounds: return "out of bounds";
    case ErrorCode::invalid_params: return "invalid parameters";
    case ErrorCode::window_too_small: return "window too small";
    case ErrorCode::underdetermined: return "underdetermined";
    case ErrorCode::empty_bar: return "empty bar";
  }
  return "unknown";
}

void validate_channel(const Channel& channel) {
  for (double v : channel.values()) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::invalid_value, "channel contains a non-finite value");
    }
  }
}

void validate_mask(const Mask& mask) {
  for (auto f : mask.values()) {
    if (f > 1) {
      throw Error(ErrorCode::invalid_value,
                  "mask flag " + std::to_string(f) + " is not binary");
    }
  }
}

std::size_t count_valid(const Mask& mask) {
  auto flags = mask.values();
  return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), std::uint8_t{1}));
}

Channel apply_mask(const Channel& clean, const Mask& mask) {
  if (!clean.same_shape(mask)) {
    throw Error(ErrorCode::dimension_mismatch, "mask does not match channel dimensions");
  }
  Channel out(clean.width(), clean.height());
  auto src = clean.values();
  auto flags = mask.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = flags[i] != 0 ? src[i] : 0.0;
  }
  return out;
}

ReconstructionProblem make_problem(Channel distorted, Mask mask, std::vector<Channel> references) {
  if (references.empty()) {
    throw Error(ErrorCode::empty_references, "at least one reference channel is required");
  }
  if (!distorted.same_shape(mask)) {
    throw Error(ErrorCode::dimension_mismatch, "mask does not match distorted channel");
  }
  for (std::size_t i = 0; i < references.size(); ++i) {
    if (!references[i].same_shape(distorted)) {
      throw Error(ErrorCode::dimension_mismatch,
                  "reference " + std::to_string(i) + " is " +
                      std::to_string(references[i].width()) + "x" +
                      std::to_string(references[i].height()) + ", expected " +
                      std::to_string(distorted.width()) + "x" +
                      std::to_string(distorted.height()));
    }
    validate_channel(references[i]);
  }
  validate_channel(distorted);
  validate_mask(mask);
  if (count_valid(mask) == 0) {
    throw Error(ErrorCode::fully_masked, "mask has no valid pixels");
  }
  return ReconstructionProblem(std::move(distorted), std::move(mask), std::move(references));
}

}  // namespace nocs
