#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <vector>

#include "image_io.hpp"
#include "nocs/metrics.hpp"
#include "nocs/reconstructor.hpp"

namespace nocs::cli {

namespace fs = std::filesystem;

namespace {

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const io::IoError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const Error& e) {
    err << "validation error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return kValidationError;
  }
}

void require_path(const fs::path& path, const char* flag) {
  if (path.empty()) throw Error(ErrorCode::invalid_params, std::string(flag) + " is required");
}

MaskSpec mask_spec_for(const RunConfig& config, int width, int height, std::uint64_t seed) {
  MaskSpec spec;
  spec.width = width;
  spec.height = height;
  spec.pattern = config.pattern;
  spec.density = config.density;
  spec.element_size =
      config.element_size > 0 ? config.element_size : default_element_size(width, height);
  spec.seed = seed;
  return spec;
}

Mask load_mask(const fs::path& path, const io::Raster& image) {
  auto mask = io::mask_from_raster(io::read_image(path));
  if (mask.width() != image.width || mask.height() != image.height) {
    throw Error(ErrorCode::dimension_mismatch,
                "mask is " + std::to_string(mask.width()) + "x" + std::to_string(mask.height()) +
                    ", image is " + std::to_string(image.width) + "x" +
                    std::to_string(image.height));
  }
  return mask;
}

io::Raster distort(const io::Raster& clean, int channel, const Mask& mask) {
  io::Raster out = clean;
  const auto plane = apply_mask(io::extract_channel(clean, channel), mask);
  io::store_channel(out, channel, plane);
  return out;
}

io::Raster reconstruct_raster(const io::Raster& distorted, const Mask& mask,
                              const RunConfig& config, std::ostream& err) {
  auto target = io::extract_channel(distorted, config.channel);
  std::vector<Channel> references;
  for (int c = 0; c < distorted.channels; ++c) {
    if (c != config.channel) references.push_back(io::extract_channel(distorted, c));
  }
  auto problem = make_problem(std::move(target), mask, std::move(references));

  ReconstructionOptions options;
  options.workers = config.workers;
  if (config.progress) {
    options.progress = [&err](std::size_t iteration, std::size_t remaining) {
      err << "\riteration " << iteration << ", " << remaining << " pixels left   " << std::flush;
      if (remaining == 0) err << '\n';
    };
  }
  const auto restored = reconstruct(problem, config.params, options);
  io::Raster out = distorted;
  io::store_channel(out, config.channel, restored);
  return out;
}

std::string csv_row(const std::string& name, const std::string& psnr_db, const std::string& ssim,
                    const std::string& seconds) {
  return name + "," + psnr_db + "," + ssim + "," + seconds + "\n";
}

std::string seconds_field(bool timing, double seconds) {
  return timing ? format_metric(seconds, 3) : std::string{};
}

}  // namespace

std::string format_metric(double value, int decimals) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
  return buffer;
}

int cmd_mask(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    require_path(config.output, "--output");
    const auto image = io::read_image(config.input);
    io::extract_channel(image, config.channel);

    Mask mask;
    std::string comment;
    if (!config.mask_file.empty()) {
      mask = load_mask(config.mask_file, image);
      comment = "mask=" + config.mask_file.string();
    } else {
      require_path(config.mask_output, "--mask-out");
      const auto spec = mask_spec_for(config, image.width, image.height, config.seed);
      mask = generate_mask(spec);
      comment = describe(spec);
      io::write_image(config.mask_output, io::mask_to_raster(mask), comment);
    }
    io::write_image(config.output, distort(image, config.channel, mask), comment);

    const double missing =
        1.0 - static_cast<double>(count_valid(mask)) / static_cast<double>(mask.size());
    out << comment << "\nmasked fraction: " << format_metric(missing, 4) << '\n';
    return kSuccess;
  });
}

int cmd_reconstruct(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    require_path(config.output, "--output");
    require_path(config.mask_file, "--mask");
    const auto image = io::read_image(config.input);
    const auto mask = load_mask(config.mask_file, image);
    io::extract_channel(image, config.channel);
    validate(config.params);

    const auto start = std::chrono::steady_clock::now();
    const auto restored = reconstruct_raster(image, mask, config, err);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    io::write_image(config.output, restored);
    out << "reconstructed " << (mask.size() - count_valid(mask)) << " pixels in "
        << format_metric(elapsed.count(), 2) << " s\n";
    return kSuccess;
  });
}

int cmd_evaluate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto clean = io::read_image(config.reference);
    const auto test = io::read_image(config.input);
    const auto report = evaluate(io::extract_channel(clean, config.channel),
                                 io::extract_channel(test, config.channel));
    out << "PSNR: " << format_metric(report.psnr_db, 2)
        << " dB, SSIM: " << format_metric(report.ssim, 3) << '\n';
    if (!config.csv.empty()) {
      const bool fresh = !fs::exists(config.csv) || fs::file_size(config.csv) == 0;
      std::ofstream csv(config.csv, std::ios::app | std::ios::binary);
      if (!csv) throw io::IoError("cannot open " + config.csv.string());
      if (fresh) csv << kCsvHeader << '\n';
      csv << csv_row(config.input.string(), format_metric(report.psnr_db, 4),
                     format_metric(report.ssim, 6), {});
    }
    return kSuccess;
  });
}

int cmd_batch(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!fs::is_directory(config.image_dir)) {
      throw io::IoError("not a directory: " + config.image_dir.string());
    }
    validate(config.params);
    std::vector<fs::path> images;
    for (const auto& entry : fs::directory_iterator(config.image_dir)) {
      if (entry.is_regular_file() && io::is_image_path(entry.path())) {
        images.push_back(entry.path());
      }
    }
    if (images.empty()) throw io::IoError("no images in " + config.image_dir.string());
    std::sort(images.begin(), images.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
    if (!config.output_dir.empty()) fs::create_directories(config.output_dir);

    std::string table(kCsvHeader);
    table += '\n';
    double psnr_sum = 0.0, ssim_sum = 0.0, seconds_sum = 0.0;
    std::size_t succeeded = 0;
    for (std::size_t i = 0; i < images.size(); ++i) {
      const auto name = images[i].filename().string();
      try {
        const auto start = std::chrono::steady_clock::now();
        const auto clean = io::read_image(images[i]);
        const auto spec = mask_spec_for(config, clean.width, clean.height, config.seed + i);
        const auto mask = generate_mask(spec);
        const auto restored = reconstruct_raster(distort(clean, config.channel, mask), mask,
                                                 config, err);
        const auto report = evaluate(io::extract_channel(clean, config.channel),
                                     io::extract_channel(restored, config.channel));
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        if (!config.output_dir.empty()) {
          io::write_image(config.output_dir / images[i].filename(), restored);
        }
        table += csv_row(name, format_metric(report.psnr_db, 4), format_metric(report.ssim, 6),
                         seconds_field(config.timing, elapsed.count()));
        psnr_sum += report.psnr_db;
        ssim_sum += report.ssim;
        seconds_sum += elapsed.count();
        ++succeeded;
      } catch (const std::exception& e) {
        err << name << ": " << e.what() << '\n';
        table += csv_row(name, "error", "error", {});
      }
    }
    if (succeeded > 0) {
      const auto n = static_cast<double>(succeeded);
      table += csv_row("mean", format_metric(psnr_sum / n, 4), format_metric(ssim_sum / n, 6),
                       seconds_field(config.timing, seconds_sum / n));
    } else {
      table += csv_row("mean", "error", "error", {});
    }

    if (config.csv.empty()) {
      out << table;
    } else {
      std::ofstream csv(config.csv, std::ios::binary | std::ios::trunc);
      if (!csv) throw io::IoError("cannot open " + config.csv.string());
      csv << table;
      out << "evaluated " << succeeded << " of " << images.size() << " images\n";
    }
    return kSuccess;
  });
}

}  // namespace nocs::cli
