#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace wvi {

// The four view classes. The order is fixed; serialization codes and
// tie-breaking both rely on it.
enum class SemanticLabel : uint8_t {
  Greenery = 0,
  Waterbody = 1,
  Sky = 2,
  Construction = 3,
};

inline constexpr int kNumLabels = 4;

inline constexpr std::array<SemanticLabel, kNumLabels> all_labels() {
  return {SemanticLabel::Greenery, SemanticLabel::Waterbody, SemanticLabel::Sky,
          SemanticLabel::Construction};
}

const char* label_name(SemanticLabel l);

// Integer code used in file formats. Code 2 (Sky) is reserved for the
// background layer; geometry carrying it is a validation error.
inline constexpr int label_code(SemanticLabel l) { return static_cast<int>(l); }

// Returns nullopt for codes outside 0..3.
std::optional<SemanticLabel> label_from_code(long long code);

struct Rgb8 {
  uint8_t r = 0;
  uint8_t g = 0;
  uint8_t b = 0;

  bool operator==(const Rgb8& o) const { return r == o.r && g == o.g && b == o.b; }
};

// Fixed palette. Compiled in: the renderer and the pixel counter must agree
// on exact byte values.
Rgb8 label_to_color(SemanticLabel l);

// Exact inverse of label_to_color on the four palette colors; any other
// color is nullopt (a rendering defect upstream).
std::optional<SemanticLabel> color_to_label(const Rgb8& c);

struct WviRecord {
  std::string window_id;
  double wvi_greenery = 0.0;
  double wvi_waterbody = 0.0;
  double wvi_sky = 0.0;
  double wvi_construction = 0.0;

  // Exact pixel counts backing the four ratios; counts sum to total_pixels
  // for any valid four-color image.
  std::array<uint64_t, kNumLabels> pixel_counts{};
  uint64_t total_pixels = 0;

  double value(SemanticLabel l) const {
    switch (l) {
      case SemanticLabel::Greenery:
        return wvi_greenery;
      case SemanticLabel::Waterbody:
        return wvi_waterbody;
      case SemanticLabel::Sky:
        return wvi_sky;
      case SemanticLabel::Construction:
        return wvi_construction;
    }
    return 0.0;
  }
};

}  // namespace wvi
