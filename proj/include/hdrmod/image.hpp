#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hdrmod/errors.hpp"

namespace hdrmod {

/// Dense row-major image with interleaved channels (height x width x channels).
template <typename T>
class Image {
 public:
  using value_type = T;

  Image() = default;
  Image(std::size_t height, std::size_t width, std::size_t channels = 1, T fill = T{})
      : height_(height), width_(width), channels_(channels),
        data_(height * width * channels, fill) {}

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t channels() const noexcept { return channels_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t pixels() const noexcept { return height_ * width_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t row, std::size_t col, std::size_t ch = 0) {
    return data_[(row * width_ + col) * channels_ + ch];
  }
  const T& operator()(std::size_t row, std::size_t col, std::size_t ch = 0) const {
    return data_[(row * width_ + col) * channels_ + ch];
  }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  bool same_shape(const Image& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_ && channels_ == other.channels_;
  }

  template <typename U>
  bool same_shape(const Image<U>& other) const noexcept {
    return height_ == other.height() && width_ == other.width() && channels_ == other.channels();
  }

  bool operator==(const Image&) const = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::size_t channels_ = 0;
  std::vector<T> data_;
};

/// Single-channel real image used by the gradient and spectral operators.
using Plane = Image<double>;

/// Copies one channel out of a multi-channel image.
Plane extract_channel(const Image<double>& image, std::size_t channel);

/// Writes a single-channel plane into one channel of `image`. Shapes must agree.
void insert_channel(Image<double>& image, const Plane& plane, std::size_t channel);

template <typename T>
Image<double> to_real(const Image<T>& image) {
  Image<double> out(image.height(), image.width(), image.channels());
  auto src = image.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = static_cast<double>(src[i]);
  return out;
}

}  // namespace hdrmod
