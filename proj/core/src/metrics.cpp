#include "nocs/metrics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace nocs {

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = (0.01 * kPeakValue) * (0.01 * kPeakValue);
constexpr double kC2 = (0.03 * kPeakValue) * (0.03 * kPeakValue);

void require_same_shape(const Channel& a, const Channel& b) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::dimension_mismatch, "metric inputs differ in size");
  }
}

std::array<double, kWindow> gaussian_taps() {
  std::array<double, kWindow> taps{};
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - kWindow / 2;
    taps[static_cast<std::size_t>(i)] = std::exp(-d * d / (2.0 * kSigma * kSigma));
    sum += taps[static_cast<std::size_t>(i)];
  }
  for (auto& t : taps) t /= sum;
  return taps;
}

// Separable valid-region Gaussian filter of w x h data into
// (w - 10) x (h - 10).
std::vector<double> filter_valid(const std::vector<double>& src, int w, int h,
                                 const std::array<double, kWindow>& taps) {
  const int ow = w - kWindow + 1;
  const int oh = h - kWindow + 1;
  std::vector<double> rows(static_cast<std::size_t>(ow) * h);
  for (int y = 0; y < h; ++y) {
    const double* in = src.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k) acc += taps[static_cast<std::size_t>(k)] * in[x + k];
      rows[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k) {
        acc += taps[static_cast<std::size_t>(k)] * rows[static_cast<std::size_t>(y + k) * ow + x];
      }
      out[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  return out;
}

}  // namespace

double mean_squared_error(const Channel& reference, const Channel& test) {
  require_same_shape(reference, test);
  const auto a = reference.values();
  const auto b = test.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.size());
}

double psnr(const Channel& reference, const Channel& test) {
  const double mse = mean_squared_error(reference, test);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(kPeakValue * kPeakValue / mse);
}

double ssim(const Channel& reference, const Channel& test) {
  require_same_shape(reference, test);
  const int w = reference.width();
  const int h = reference.height();
  if (w < kWindow || h < kWindow) {
    throw Error(ErrorCode::invalid_value, "SSIM needs images of at least 11x11 pixels");
  }
  const auto a = reference.values();
  const auto b = test.values();
  const std::size_t n = a.size();
  std::vector<double> xa(a.begin(), a.end());
  std::vector<double> xb(b.begin(), b.end());
  std::vector<double> aa(n), bb(n), ab(n);
  for (std::size_t i = 0; i < n; ++i) {
    aa[i] = xa[i] * xa[i];
    bb[i] = xb[i] * xb[i];
    ab[i] = xa[i] * xb[i];
  }
  const auto taps = gaussian_taps();
  const auto mu_a = filter_valid(xa, w, h, taps);
  const auto mu_b = filter_valid(xb, w, h, taps);
  const auto e_aa = filter_valid(aa, w, h, taps);
  const auto e_bb = filter_valid(bb, w, h, taps);
  const auto e_ab = filter_valid(ab, w, h, taps);

  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i];
    const double mb = mu_b[i];
    const double var_a = e_aa[i] - ma * ma;
    const double var_b = e_bb[i] - mb * mb;
    const double cov = e_ab[i] - ma * mb;
    total += ((2.0 * ma * mb + kC1) * (2.0 * cov + kC2)) /
             ((ma * ma + mb * mb + kC1) * (var_a + var_b + kC2));
  }
  return total / static_cast<double>(mu_a.size());
}

QualityReport evaluate(const Channel& reference, const Channel& test) {
  return {psnr(reference, test), ssim(reference, test)};
}

}  // namespace nocs
