#pragma once

#include "nocs/image.hpp"

namespace nocs {

inline constexpr double kPeakValue = 255.0;

struct QualityReport {
  /// +infinity for identical inputs.
  double psnr_db = 0.0;
  double ssim = 0.0;
};

double mean_squared_error(const Channel& reference, const Channel& test);

/// 10 log10(255^2 / MSE) over the whole channel; +infinity when MSE is 0.
double psnr(const Channel& reference, const Channel& test);

/// Mean SSIM: 11x11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03,
/// L = 255, averaged over window positions fully inside the image. Both
/// sides must be at least 11 pixels.
double ssim(const Channel& reference, const Channel& test);

QualityReport evaluate(const Channel& reference, const Channel& test);

}  // namespace nocs
