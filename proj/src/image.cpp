#include "hdrmod/image.hpp"

namespace hdrmod {

Plane extract_channel(const Image<double>& image, std::size_t channel) {
  if (channel >= image.channels()) throw ShapeError("channel index out of range");
  Plane plane(image.height(), image.width(), 1);
  for (std::size_t r = 0; r < image.height(); ++r)
    for (std::size_t c = 0; c < image.width(); ++c) plane(r, c) = image(r, c, channel);
  return plane;
}

void insert_channel(Image<double>& image, const Plane& plane, std::size_t channel) {
  if (channel >= image.channels()) throw ShapeError("channel index out of range");
  if (plane.channels() != 1 || plane.height() != image.height() || plane.width() != image.width())
    throw ShapeError("plane shape does not match image");
  for (std::size_t r = 0; r < image.height(); ++r)
    for (std::size_t c = 0; c < image.width(); ++c) image(r, c, channel) = plane(r, c);
}

}  // namespace hdrmod
