#include "image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace nocs::io {

namespace fs = std::filesystem;

namespace {

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

Raster read_png(const fs::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw IoError("cannot read PNG " + path.string() + ": " + image.message);
  }
  image.format &= ~(PNG_FORMAT_FLAG_LINEAR | PNG_FORMAT_FLAG_COLORMAP);
  Raster raster;
  raster.width = static_cast<int>(image.width);
  raster.height = static_cast<int>(image.height);
  raster.channels = static_cast<int>(PNG_IMAGE_PIXEL_CHANNELS(image.format));
  raster.samples.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, raster.samples.data(), 0, nullptr)) {
    const std::string message = image.message;
    png_image_free(&image);
    throw IoError("cannot decode PNG " + path.string() + ": " + message);
  }
  return raster;
}

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};

void write_png(const fs::path& path, const Raster& raster, const std::string& comment) {
  int color_type = 0;
  switch (raster.channels) {
    case 1: color_type = PNG_COLOR_TYPE_GRAY; break;
    case 2: color_type = PNG_COLOR_TYPE_GRAY_ALPHA; break;
    case 3: color_type = PNG_COLOR_TYPE_RGB; break;
    case 4: color_type = PNG_COLOR_TYPE_RGBA; break;
    default:
      throw IoError("PNG holds 1 to 4 channels; use a .bands manifest for " +
                    std::to_string(raster.channels));
  }
  std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("cannot open " + path.string() + " for writing");

  std::string key = "Comment";
  std::string text = comment;
  png_text chunk{};
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed writing PNG " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(raster.width),
               static_cast<png_uint_32>(raster.height), 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  if (!comment.empty()) {
    chunk.compression = PNG_TEXT_COMPRESSION_NONE;
    chunk.key = key.data();
    chunk.text = text.data();
    chunk.text_length = text.size();
    png_set_text(png, info, &chunk, 1);
  }
  png_write_info(png, info);
  const auto stride = static_cast<std::size_t>(raster.width) * raster.channels;
  for (int y = 0; y < raster.height; ++y) {
    png_write_row(png, raster.samples.data() + static_cast<std::size_t>(y) * stride);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void skip_space_and_comments(std::istream& in) {
  while (in >> std::ws && in.peek() == '#') {
    std::string line;
    std::getline(in, line);
  }
}

Raster read_pnm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string magic;
  in >> magic;
  int channels = 0;
  bool ascii = false;
  if (magic == "P5" || magic == "P2") channels = 1;
  if (magic == "P6" || magic == "P3") channels = 3;
  ascii = magic == "P2" || magic == "P3";
  if (channels == 0) throw IoError(path.string() + ": unsupported PNM type '" + magic + "'");

  int width = 0, height = 0, maxval = 0;
  skip_space_and_comments(in);
  in >> width;
  skip_space_and_comments(in);
  in >> height;
  skip_space_and_comments(in);
  in >> maxval;
  if (!in || width < 1 || height < 1 || maxval < 1 || maxval > 255) {
    throw IoError(path.string() + ": bad PNM header (8-bit images only)");
  }
  in.get();

  Raster raster{width, height, channels, {}};
  raster.samples.resize(static_cast<std::size_t>(width) * height * channels);
  if (ascii) {
    for (auto& s : raster.samples) {
      int v = -1;
      in >> v;
      if (!in || v < 0 || v > maxval) throw IoError(path.string() + ": bad sample");
      s = static_cast<std::uint8_t>(v);
    }
  } else {
    in.read(reinterpret_cast<char*>(raster.samples.data()),
            static_cast<std::streamsize>(raster.samples.size()));
    if (!in) throw IoError(path.string() + ": truncated pixel data");
  }
  if (maxval != 255) {
    for (auto& s : raster.samples) {
      s = static_cast<std::uint8_t>(std::lround(s * 255.0 / maxval));
    }
  }
  return raster;
}

void write_pnm(const fs::path& path, const Raster& raster, const std::string& comment) {
  if (raster.channels != 1 && raster.channels != 3) {
    throw IoError("PNM output needs 1 or 3 channels, got " + std::to_string(raster.channels));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << (raster.channels == 1 ? "P5" : "P6") << '\n';
  if (!comment.empty()) out << "# " << comment << '\n';
  out << raster.width << ' ' << raster.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(raster.samples.data()),
            static_cast<std::streamsize>(raster.samples.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

Raster read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  Raster out;
  std::vector<Raster> bands;
  std::string line;
  while (std::getline(in, line)) {
    line.erase(0, line.find_first_not_of(" \t\r"));
    line.erase(line.find_last_not_of(" \t\r") + 1);
    if (line.empty() || line.front() == '#') continue;
    fs::path band = line;
    if (band.is_relative()) band = path.parent_path() / band;
    auto raster = read_image(band);
    if (raster.channels != 1) throw IoError(band.string() + ": manifest bands must be grayscale");
    if (!bands.empty() && (raster.width != bands.front().width ||
                           raster.height != bands.front().height)) {
      throw IoError(band.string() + ": band size differs from the first band");
    }
    bands.push_back(std::move(raster));
  }
  if (bands.empty()) throw IoError("manifest " + path.string() + " lists no bands");
  out.width = bands.front().width;
  out.height = bands.front().height;
  out.channels = static_cast<int>(bands.size());
  out.samples.resize(static_cast<std::size_t>(out.width) * out.height * out.channels);
  for (int c = 0; c < out.channels; ++c) {
    for (int y = 0; y < out.height; ++y) {
      for (int x = 0; x < out.width; ++x) out.at(x, y, c) = bands[c].at(x, y, 0);
    }
  }
  return out;
}

void write_manifest(const fs::path& path, const Raster& raster, const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  if (!comment.empty()) out << "# " << comment << '\n';
  for (int c = 0; c < raster.channels; ++c) {
    Raster band{raster.width, raster.height, 1, {}};
    band.samples.resize(static_cast<std::size_t>(raster.width) * raster.height);
    for (int y = 0; y < raster.height; ++y) {
      for (int x = 0; x < raster.width; ++x) band.at(x, y, 0) = raster.at(x, y, c);
    }
    const std::string name = path.stem().string() + ".band" + std::to_string(c) + ".png";
    write_png(path.parent_path() / name, band, comment);
    out << name << '\n';
  }
}

}  // namespace

bool is_image_path(const fs::path& path) {
  const auto ext = lower_extension(path);
  return ext == ".png" || ext == ".ppm" || ext == ".pgm" || ext == ".pnm" || ext == ".bands";
}

Raster read_image(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw IoError("no such file: " + path.string());
  const auto ext = lower_extension(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".ppm" || ext == ".pgm" || ext == ".pnm") return read_pnm(path);
  if (ext == ".bands") return read_manifest(path);
  throw IoError("unsupported image format: " + path.string());
}

void write_image(const fs::path& path, const Raster& raster, const std::string& comment) {
  const auto ext = lower_extension(path);
  if (ext == ".png") return write_png(path, raster, comment);
  if (ext == ".ppm" || ext == ".pgm" || ext == ".pnm") return write_pnm(path, raster, comment);
  if (ext == ".bands") return write_manifest(path, raster, comment);
  throw IoError("unsupported output format: " + path.string());
}

Channel extract_channel(const Raster& raster, int channel) {
  if (channel < 0 || channel >= raster.channels) {
    throw Error(ErrorCode::out_of_bounds, "channel " + std::to_string(channel) +
                                              " does not exist in a " +
                                              std::to_string(raster.channels) + "-channel image");
  }
  Channel out(raster.width, raster.height);
  for (int y = 0; y < raster.height; ++y) {
    for (int x = 0; x < raster.width; ++x) out(x, y) = raster.at(x, y, channel);
  }
  return out;
}

std::uint8_t quantize(double value) noexcept {
  // nearbyint follows the default round-to-nearest-even mode.
  return static_cast<std::uint8_t>(std::nearbyint(std::clamp(value, 0.0, 255.0)));
}

void store_channel(Raster& raster, int channel, const Channel& values) {
  if (channel < 0 || channel >= raster.channels) {
    throw Error(ErrorCode::out_of_bounds, "channel index out of range");
  }
  if (values.width() != raster.width || values.height() != raster.height) {
    throw Error(ErrorCode::dimension_mismatch, "channel does not match image size");
  }
  for (int y = 0; y < raster.height; ++y) {
    for (int x = 0; x < raster.width; ++x) raster.at(x, y, channel) = quantize(values(x, y));
  }
}

Mask mask_from_raster(const Raster& raster) {
  if (raster.channels != 1) {
    throw Error(ErrorCode::invalid_value, "mask files must be single-channel");
  }
  Mask mask(raster.width, raster.height);
  for (int y = 0; y < raster.height; ++y) {
    for (int x = 0; x < raster.width; ++x) {
      const auto v = raster.at(x, y, 0);
      if (v != 0 && v != 255) {
        throw Error(ErrorCode::invalid_value,
                    "mask sample " + std::to_string(v) + " is neither 0 nor 255");
      }
      mask(x, y) = v == 255 ? 1 : 0;
    }
  }
  return mask;
}

Raster mask_to_raster(const Mask& mask) {
  Raster raster{mask.width(), mask.height(), 1, {}};
  raster.samples.reserve(mask.size());
  for (auto f : mask.values()) raster.samples.push_back(f ? 255 : 0);
  return raster;
}

}  // namespace nocs::io
