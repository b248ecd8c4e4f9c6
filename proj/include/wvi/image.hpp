#pragma once

#include <string>
#include <vector>

#include "wvi/core.hpp"

namespace wvi {

// 8-bit RGB image, row-major from the top row. The renderer contract keeps
// every pixel on one of the four palette colors.
struct ViewImage {
  int width = 0;
  int height = 0;
  std::vector<Rgb8> pixels;

  ViewImage() = default;
  ViewImage(int w, int h, Rgb8 fill) : width(w), height(h), pixels(static_cast<size_t>(w) * h, fill) {}

  Rgb8& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
  const Rgb8& at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
  size_t pixel_count() const { return pixels.size(); }

  bool operator==(const ViewImage& o) const {
    return width == o.width && height == o.height && pixels == o.pixels;
  }
};

// Binary PPM (P6), maxval 255, top row first; bit-exact round trip.
void save_ppm(const ViewImage& image, const std::string& path);
ViewImage load_ppm(const std::string& path);

}  // namespace wvi
