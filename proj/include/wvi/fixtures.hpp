#pragma once

#include <array>
#include <string>
#include <vector>

#include "wvi/camera.hpp"
#include "wvi/render.hpp"
#include "wvi/windows_io.hpp"

namespace wvi {

// Analytically expected WVIs for one fixture window, with per-label
// tolerances (0 = exact).
struct FixtureExpectation {
  std::string window_id;
  std::array<double, kNumLabels> wvi{};
  std::array<double, kNumLabels> tolerance{};
};

struct Fixture {
  std::string name;
  ColoredScene scene;
  std::vector<WindowSpec> windows;
  std::vector<FixtureExpectation> expected;  // empty when no analytic values exist
  RenderParams render;                       // parameters the expectations assume
};

struct FixtureParams {
  int width = 900;
  int height = 900;
  double fov_deg = 60.0;
  double near_m = 0.1;
  double far_m = 20000.0;
  uint64_t seed = 1;
  // synthetic-city knobs
  int city_boxes = 40;
  int city_grid = 48;  // near terrain nodes per side
  int far_grid = 40;   // far terrain nodes per side
  int n_windows = 5;
};

// Deterministic synthetic scenes with known content:
//   empty-sky    — background only, (0,0,1,0) exact
//   full-wall    — construction wall filling the frustum, (0,0,0,1) exact
//   half-wall    — wall edge on the image centerline, construction 0.5
//   quad-split   — one quarter each: construction, greenery, waterbody, sky
//   synthetic-city — seeded boxes over labeled terrain plus a far DSM layer
Fixture make_fixture(const std::string& name, const FixtureParams& params = {});

const std::vector<std::string>& fixture_names();

// Writes scene.ply / far.ply / windows.csv / expected.csv / params.ini so a
// fixture doubles as an on-disk format test.
void export_fixture(const Fixture& fixture, const std::string& dir);

}  // namespace wvi
