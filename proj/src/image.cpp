#include "wvi/image.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "wvi/error.hpp"

namespace wvi {

void save_ppm(const ViewImage& image, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError(path + ": cannot open for writing");
  os << "P6\n" << image.width << ' ' << image.height << "\n255\n";
  for (const Rgb8& p : image.pixels) {
    char bytes[3] = {static_cast<char>(p.r), static_cast<char>(p.g), static_cast<char>(p.b)};
    os.write(bytes, 3);
  }
  if (!os) throw IoError(path + ": write failed");
}

ViewImage load_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string data = ss.str();

  size_t pos = 0;
  auto next_token = [&]() -> std::string {
    for (;;) {
      while (pos < data.size() && std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
      if (pos < data.size() && data[pos] == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    size_t start = pos;
    while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
    if (start == pos) throw ParseError(path + ": truncated ppm header");
    return data.substr(start, pos - start);
  };

  if (next_token() != "P6") throw ParseError(path + ": not a binary ppm (P6)");
  int w = std::stoi(next_token());
  int h = std::stoi(next_token());
  int maxval = std::stoi(next_token());
  if (w <= 0 || h <= 0) throw ParseError(path + ": bad image size");
  if (maxval != 255) throw ParseError(path + ": only maxval 255 is supported");
  ++pos;  // single whitespace byte after maxval

  size_t need = static_cast<size_t>(w) * h * 3;
  if (data.size() - pos < need) throw ParseError(path + ": truncated pixel data");

  ViewImage image(w, h, {0, 0, 0});
  for (size_t i = 0; i < image.pixel_count(); ++i) {
    image.pixels[i] = {static_cast<uint8_t>(data[pos + 3 * i]),
                       static_cast<uint8_t>(data[pos + 3 * i + 1]),
                       static_cast<uint8_t>(data[pos + 3 * i + 2])};
  }
  return image;
}

}  // namespace wvi
