#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "nocs/masks.hpp"
#include "nocs/params.hpp"

namespace nocs::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInputError = 2,
  kValidationError = 3,
};

inline constexpr std::string_view kCsvHeader = "image,psnr_db,ssim,seconds";

/// Settings shared by all subcommands. Unused fields are ignored.
struct RunConfig {
  std::filesystem::path input;
  std::filesystem::path mask_file;
  std::filesystem::path output;
  std::filesystem::path mask_output;
  std::filesystem::path reference;
  std::filesystem::path image_dir;
  std::filesystem::path output_dir;
  std::filesystem::path csv;

  /// Mask generation, used when `mask_file` is empty.
  MaskPattern pattern = MaskPattern::four_quadrant;
  double density = 0.15;
  /// 0 picks `default_element_size` for the image at hand.
  int element_size = 0;
  std::uint64_t seed = 0;

  int channel = 1;
  NocsParams params;
  int workers = 0;
  bool progress = false;
  /// Fill the CSV `seconds` column; off by default so reruns are
  /// byte-identical.
  bool timing = false;
};

/// Each command reports failures on `err` and returns an `ExitCode`.
int cmd_mask(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_reconstruct(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_evaluate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_batch(const RunConfig& config, std::ostream& out, std::ostream& err);

/// "inf" or fixed-point with `decimals` digits.
std::string format_metric(double value, int decimals);

}  // namespace nocs::cli
