#include "wvi/core.hpp"

namespace wvi {

const char* label_name(SemanticLabel l) {
  switch (l) {
    case SemanticLabel::Greenery:
      return "greenery";
    case SemanticLabel::Waterbody:
      return "waterbody";
    case SemanticLabel::Sky:
      return "sky";
    case SemanticLabel::Construction:
      return "construction";
  }
  return "?";
}

std::optional<SemanticLabel> label_from_code(long long code) {
  if (code < 0 || code > 3) return std::nullopt;
  return static_cast<SemanticLabel>(code);
}

Rgb8 label_to_color(SemanticLabel l) {
  switch (l) {
    case SemanticLabel::Greenery:
      return {0, 255, 0};
    case SemanticLabel::Waterbody:
      return {0, 0, 255};
    case SemanticLabel::Sky:
      return {255, 255, 255};
    case SemanticLabel::Construction:
      return {255, 0, 0};
  }
  return {0, 0, 0};
}

std::optional<SemanticLabel> color_to_label(const Rgb8& c) {
  for (SemanticLabel l : all_labels()) {
    if (label_to_color(l) == c) return l;
  }
  return std::nullopt;
}

}  // namespace wvi
