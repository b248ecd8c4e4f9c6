#include <doctest.h>

#include "wvi/core.hpp"

using namespace wvi;

TEST_CASE("palette matches the fixed label colors") {
  CHECK(label_to_color(SemanticLabel::Greenery) == Rgb8{0, 255, 0});
  CHECK(label_to_color(SemanticLabel::Waterbody) == Rgb8{0, 0, 255});
  CHECK(label_to_color(SemanticLabel::Sky) == Rgb8{255, 255, 255});
  CHECK(label_to_color(SemanticLabel::Construction) == Rgb8{255, 0, 0});
}

TEST_CASE("color_to_label inverts the palette exactly") {
  CHECK(color_to_label({255, 0, 0}) == SemanticLabel::Construction);
  CHECK(color_to_label({255, 255, 255}) == SemanticLabel::Sky);
  CHECK(color_to_label({0, 255, 0}) == SemanticLabel::Greenery);
  CHECK(color_to_label({0, 0, 255}) == SemanticLabel::Waterbody);
  CHECK_FALSE(color_to_label({128, 128, 0}).has_value());
  CHECK_FALSE(color_to_label({254, 0, 0}).has_value());
  CHECK_FALSE(color_to_label({0, 0, 0}).has_value());
}

TEST_CASE("label/color round trip over all four labels") {
  for (SemanticLabel l : all_labels()) {
    auto back = color_to_label(label_to_color(l));
    REQUIRE(back.has_value());
    CHECK(*back == l);
  }
}

TEST_CASE("palette is injective") {
  auto labels = all_labels();
  for (size_t i = 0; i < labels.size(); ++i)
    for (size_t j = i + 1; j < labels.size(); ++j)
      CHECK_FALSE(label_to_color(labels[i]) == label_to_color(labels[j]));
}

TEST_CASE("label integer codes are fixed") {
  CHECK(label_code(SemanticLabel::Greenery) == 0);
  CHECK(label_code(SemanticLabel::Waterbody) == 1);
  CHECK(label_code(SemanticLabel::Sky) == 2);
  CHECK(label_code(SemanticLabel::Construction) == 3);
  CHECK(label_from_code(3) == SemanticLabel::Construction);
  CHECK_FALSE(label_from_code(4).has_value());
  CHECK_FALSE(label_from_code(-1).has_value());
}

TEST_CASE("label ordering is Greenery < Waterbody < Sky < Construction") {
  CHECK(SemanticLabel::Greenery < SemanticLabel::Waterbody);
  CHECK(SemanticLabel::Waterbody < SemanticLabel::Sky);
  CHECK(SemanticLabel::Sky < SemanticLabel::Construction);
}
