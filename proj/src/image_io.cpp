#include "hdrmod/image_io.hpp"

#include <png.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

namespace hdrmod {

PngImage read_png(const std::filesystem::path& path) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (png_image_begin_read_from_file(&img, path.c_str()) == 0)
    throw IoError("cannot read PNG " + path.string() + ": " + img.message);

  const bool color = (img.format & PNG_FORMAT_FLAG_COLOR) != 0;
  img.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const std::size_t channels = color ? 3 : 1;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(img));
  if (png_image_finish_read(&img, nullptr, buffer.data(), 0, nullptr) == 0) {
    const std::string message = img.message;
    png_image_free(&img);
    throw IoError("cannot decode PNG " + path.string() + ": " + message);
  }

  PngImage out{Image<std::uint16_t>(img.height, img.width, channels), 8};
  auto dst = out.samples.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = buffer[i];
  return out;
}

void write_png(const std::filesystem::path& path, const Image<std::uint8_t>& image) {
  if (image.channels() != 1 && image.channels() != 3)
    throw IoError("PNG writer supports gray or RGB images");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());

  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  img.format = image.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (png_image_write_to_file(&img, path.c_str(), 0, image.values().data(), 0, nullptr) == 0)
    throw IoError("cannot write PNG " + path.string() + ": " + img.message);
}

void write_pfm(const std::filesystem::path& path, const Image<double>& image) {
  if (image.channels() != 1 && image.channels() != 3)
    throw IoError("PFM writer supports gray or RGB images");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string());
  out << (image.channels() == 3 ? "PF" : "Pf") << '\n'
      << image.width() << ' ' << image.height() << '\n'
      << "-1.0\n";

  const std::size_t stride = image.width() * image.channels();
  std::vector<unsigned char> row(stride * 4);
  for (std::size_t r = image.height(); r-- > 0;) {
    for (std::size_t i = 0; i < stride; ++i) {
      auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(image.values()[r * stride + i]));
      for (int b = 0; b < 4; ++b) row[4 * i + b] = static_cast<unsigned char>(bits >> (8 * b));
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw IoError("failed writing " + path.string());
}

Image<double> read_pfm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string magic;
  std::size_t width = 0;
  std::size_t height = 0;
  double scale = 0.0;
  in >> magic >> width >> height >> scale;
  in.get();
  if ((magic != "PF" && magic != "Pf") || !in || width == 0 || height == 0 || scale == 0.0)
    throw IoError(path.string() + " has a malformed PFM header");
  const std::size_t channels = magic == "PF" ? 3 : 1;
  const bool little = scale < 0.0;

  Image<double> image(height, width, channels);
  const std::size_t stride = width * channels;
  std::vector<unsigned char> row(stride * 4);
  for (std::size_t r = height; r-- > 0;) {
    in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size()));
    if (!in) throw IoError(path.string() + " is truncated");
    for (std::size_t i = 0; i < stride; ++i) {
      std::uint32_t bits = 0;
      for (int b = 0; b < 4; ++b) {
        const int shift = little ? 8 * b : 8 * (3 - b);
        bits |= static_cast<std::uint32_t>(row[4 * i + b]) << shift;
      }
      image.values()[r * stride + i] = std::bit_cast<float>(bits);
    }
  }
  return image;
}

}  // namespace hdrmod
