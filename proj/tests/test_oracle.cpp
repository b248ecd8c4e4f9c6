#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "wvi/error.hpp"
#include "wvi/fixtures.hpp"
#include "wvi/ply_io.hpp"
#include "wvi/raycast.hpp"
#include "wvi/render.hpp"
#include "wvi/wvi_engine.hpp"

using namespace wvi;

namespace {

CameraPose fixture_camera(const Fixture& f, size_t i = 0) {
  return place_camera(f.windows[i], f.render);
}

// A pixel is a silhouette pixel if its 3x3 neighborhood is not uniform.
bool is_edge_pixel(const ViewImage& img, int x, int y) {
  const Rgb8& c = img.at(x, y);
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      int nx = x + dx, ny = y + dy;
      if (nx < 0 || ny < 0 || nx >= img.width || ny >= img.height) continue;
      if (!(img.at(nx, ny) == c)) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("raycast: empty scene is all sky") {
  ColoredScene scene = make_scene(LabeledMesh{});
  CameraPose cam = place_camera({"w", {0, 0, 1.5}, 0.0});
  ViewImage img = raycast_view(scene, cam);
  for (const Rgb8& p : img.pixels) CHECK(p == label_to_color(SemanticLabel::Sky));
}

TEST_CASE("raycast: full-frustum wall matches the rasterizer exactly") {
  Fixture f = make_fixture("full-wall");
  CameraPose cam = fixture_camera(f);
  ViewImage raster = render_view(f.scene, cam);
  ViewImage cast = raycast_view(f.scene, cam);
  CHECK(raster == cast);
}

TEST_CASE("raycast: hits carry valid distances and labels") {
  LabeledMesh lm = test::random_box_scene(3, 10);
  ColoredScene scene = make_scene(std::move(lm));
  RayCaster caster(scene);
  RenderParams p;
  p.width = p.height = 150;
  CameraPose cam = place_camera({"w", {0, 0, 1.5}, 0.0}, p);
  auto hits = caster.render_hits(cam);
  size_t hit_count = 0;
  for (const auto& h : hits) {
    if (!h) continue;
    ++hit_count;
    CHECK(h->distance >= cam.near_m);
    CHECK(h->label != SemanticLabel::Sky);
    CHECK(h->triangle < caster.triangle_count());
  }
  CHECK(hit_count > 0);
}

TEST_CASE("raycast: bounding-volume hierarchy changes no hit") {
  for (uint64_t seed : {4u, 5u, 6u}) {
    LabeledMesh lm = test::random_box_scene(seed, 14);
    ColoredScene scene = make_scene(std::move(lm));
    RayCaster caster(scene);
    RenderParams p;
    p.width = p.height = 120;
    CameraPose cam = place_camera({"w", {0, 0, 1.5}, 0.0}, p);
    auto with_bvh = caster.render_hits(cam, 1, /*use_bvh=*/true);
    auto brute = caster.render_hits(cam, 1, /*use_bvh=*/false);
    REQUIRE(with_bvh.size() == brute.size());
    for (size_t i = 0; i < brute.size(); ++i) {
      CHECK(with_bvh[i].has_value() == brute[i].has_value());
      if (brute[i]) {
        CHECK(with_bvh[i]->triangle == brute[i]->triangle);
        CHECK(with_bvh[i]->distance == brute[i]->distance);
      }
    }
  }
}

TEST_CASE("raycast: parallel rays match serial rays") {
  LabeledMesh lm = test::random_box_scene(8, 12);
  ColoredScene scene = make_scene(std::move(lm));
  RayCaster caster(scene);
  RenderParams p;
  p.width = p.height = 160;
  CameraPose cam = place_camera({"w", {0, 0, 1.5}, 0.0}, p);
  CHECK(caster.render(cam, 1) == caster.render(cam, 8));
}

TEST_CASE("cross-method: random box scenes agree away from silhouettes") {
  for (uint64_t seed : {11u, 12u, 13u}) {
    LabeledMesh lm = test::random_box_scene(seed, 20);
    ColoredScene scene = make_scene(std::move(lm));
    RenderParams p;
    p.width = p.height = 300;
    CameraPose cam = place_camera({"w", {0, 0, 1.5}, 0.0}, p);
    ViewImage raster = render_view(scene, cam);
    ViewImage cast = RayCaster(scene).render(cam, 4);

    size_t disagreements = 0;
    for (int y = 0; y < raster.height; ++y) {
      for (int x = 0; x < raster.width; ++x) {
        if (raster.at(x, y) == cast.at(x, y)) continue;
        ++disagreements;
        // Disagreeing pixels must sit on a silhouette in at least one image.
        CHECK((is_edge_pixel(raster, x, y) || is_edge_pixel(cast, x, y)));
      }
    }
    CHECK(static_cast<double>(disagreements) / raster.pixel_count() <= 0.005);
  }
}

TEST_CASE("fixtures: analytic expectations hold for both renderers") {
  for (const char* name : {"empty-sky", "full-wall", "half-wall", "quad-split"}) {
    CAPTURE(name);
    Fixture f = make_fixture(name);
    REQUIRE(f.expected.size() == f.windows.size());
    CameraPose cam = fixture_camera(f);
    WviValues raster = compute_wvi(render_view(f.scene, cam));
    WviValues cast = compute_wvi(RayCaster(f.scene).render(cam, 4));
    for (SemanticLabel l : all_labels()) {
      size_t i = static_cast<size_t>(l);
      CAPTURE(i);
      CHECK(std::abs(raster.ratio(l) - f.expected[0].wvi[i]) <= f.expected[0].tolerance[i]);
      CHECK(std::abs(cast.ratio(l) - f.expected[0].wvi[i]) <= f.expected[0].tolerance[i]);
    }
  }
}

TEST_CASE("fixtures: unknown name and name list") {
  CHECK_THROWS_AS(make_fixture("no-such-fixture"), UnknownFixtureError);
  CHECK(fixture_names().size() == 5);
}

TEST_CASE("fixtures: synthetic-city is seeded and deterministic") {
  FixtureParams p;
  p.city_boxes = 10;
  p.city_grid = 16;
  p.far_grid = 12;
  p.n_windows = 3;
  Fixture a = make_fixture("synthetic-city", p);
  Fixture b = make_fixture("synthetic-city", p);
  CHECK(a.scene.near_mesh.mesh.vertices == b.scene.near_mesh.mesh.vertices);
  CHECK(a.scene.far_mesh.mesh.vertices == b.scene.far_mesh.mesh.vertices);
  CHECK(a.windows.size() == 3);
  CHECK(a.scene.far_mesh.mesh.triangles.size() > 0);

  p.seed = 2;
  Fixture c = make_fixture("synthetic-city", p);
  CHECK_FALSE(a.scene.near_mesh.mesh.vertices == c.scene.near_mesh.mesh.vertices);
}

TEST_CASE("fixtures: export round trip preserves assessment results") {
  test::TempDir dir("fixture");
  FixtureParams p;
  p.width = p.height = 200;
  p.city_boxes = 8;
  p.city_grid = 14;
  p.far_grid = 10;
  p.n_windows = 2;
  Fixture f = make_fixture("synthetic-city", p);
  export_fixture(f, dir.file("city"));

  MeshLoadResult near_loaded = load_mesh(dir.file("city/scene.ply"));
  REQUIRE(near_loaded.vertex_labels.has_value());
  REQUIRE(near_loaded.triangle_labels.has_value());
  LabeledMesh near_mesh =
      make_labeled_mesh(std::move(near_loaded.mesh), std::move(*near_loaded.vertex_labels),
                        std::move(*near_loaded.triangle_labels));
  MeshLoadResult far_loaded = load_mesh(dir.file("city/far.ply"));
  REQUIRE(far_loaded.vertex_labels.has_value());
  REQUIRE(far_loaded.triangle_labels.has_value());
  LabeledMesh far_mesh =
      make_labeled_mesh(std::move(far_loaded.mesh), std::move(*far_loaded.vertex_labels),
                        std::move(*far_loaded.triangle_labels));
  ColoredScene reloaded = make_scene(std::move(near_mesh), std::move(far_mesh), f.scene.cutoff_m);
  std::vector<WindowSpec> windows = load_windows(dir.file("city/windows.csv"));
  REQUIRE(windows.size() == f.windows.size());

  AssessParams ap;
  ap.render = f.render;
  AssessmentReport original = assess_batch(f.scene, f.windows, ap);
  AssessmentReport round_trip = assess_batch(reloaded, windows, ap);
  REQUIRE(original.records.size() == round_trip.records.size());
  for (size_t i = 0; i < original.records.size(); ++i) {
    CHECK(original.records[i].pixel_counts == round_trip.records[i].pixel_counts);
  }
}
