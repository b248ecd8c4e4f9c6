#include "wvi/fixtures.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "wvi/asc_io.hpp"
#include "wvi/distant.hpp"
#include "wvi/error.hpp"
#include "wvi/ply_io.hpp"

namespace wvi {

namespace {

// splitmix64; stable hash noise independent of library implementations.
uint64_t mix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double hash01(uint64_t seed, uint64_t a, uint64_t b, uint64_t salt) {
  uint64_t h = mix(seed ^ mix(a ^ mix(b ^ mix(salt))));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

void append_quad(LabeledMesh& lm, const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d,
                 SemanticLabel label) {
  uint32_t base = static_cast<uint32_t>(lm.mesh.vertices.size());
  lm.mesh.vertices.insert(lm.mesh.vertices.end(), {a, b, c, d});
  lm.vertex_labels.insert(lm.vertex_labels.end(), 4, label);
  lm.mesh.triangles.push_back({base, base + 1, base + 2});
  lm.mesh.triangles.push_back({base, base + 2, base + 3});
  lm.triangle_labels.insert(lm.triangle_labels.end(), 2, label);
}

// Vertical wall in the plane y = depth, spanning [x0,x1] x [z0,z1].
void append_wall(LabeledMesh& lm, double depth, double x0, double x1, double z0, double z1,
                 SemanticLabel label) {
  append_quad(lm, {x0, depth, z0}, {x1, depth, z0}, {x1, depth, z1}, {x0, depth, z1}, label);
}

void append_box(LabeledMesh& lm, const Vec3& lo, const Vec3& hi, SemanticLabel label) {
  // Sides, top, bottom; outward winding is irrelevant (no backface culling).
  append_quad(lm, {lo.x, lo.y, lo.z}, {hi.x, lo.y, lo.z}, {hi.x, lo.y, hi.z}, {lo.x, lo.y, hi.z},
              label);  // south
  append_quad(lm, {hi.x, hi.y, lo.z}, {lo.x, hi.y, lo.z}, {lo.x, hi.y, hi.z}, {hi.x, hi.y, hi.z},
              label);  // north
  append_quad(lm, {lo.x, hi.y, lo.z}, {lo.x, lo.y, lo.z}, {lo.x, lo.y, hi.z}, {lo.x, hi.y, hi.z},
              label);  // west
  append_quad(lm, {hi.x, lo.y, lo.z}, {hi.x, hi.y, lo.z}, {hi.x, hi.y, hi.z}, {hi.x, lo.y, hi.z},
              label);  // east
  append_quad(lm, {lo.x, lo.y, hi.z}, {hi.x, lo.y, hi.z}, {hi.x, hi.y, hi.z}, {lo.x, hi.y, hi.z},
              label);  // top
  append_quad(lm, {lo.x, lo.y, lo.z}, {lo.x, hi.y, lo.z}, {hi.x, hi.y, lo.z}, {hi.x, lo.y, lo.z},
              label);  // bottom
}

WindowSpec default_window() { return {"w0", {0.0, 0.0, 1.5}, 0.0}; }

RenderParams render_params(const FixtureParams& p) {
  RenderParams r;
  r.fov_deg = p.fov_deg;
  r.width = p.width;
  r.height = p.height;
  r.near_m = p.near_m;
  r.far_m = p.far_m;
  return r;
}

// Procedural terrain layer: DSM heights plus an NDVI field pushed through
// the segmentation/registration pipeline.
LabeledMesh terrain_layer(uint64_t seed, int grid_n, double half_extent, double height_scale,
                          uint64_t salt) {
  GeoRaster dsm;
  dsm.ncols = dsm.nrows = grid_n;
  dsm.cellsize = 2.0 * half_extent / grid_n;
  dsm.origin_x = -half_extent;
  dsm.origin_y = -half_extent;
  dsm.nodata = -9999.0;
  dsm.values.resize(static_cast<size_t>(grid_n) * grid_n);

  GeoRaster ndvi = dsm;
  for (int row = 0; row < grid_n; ++row) {
    for (int col = 0; col < grid_n; ++col) {
      dsm.value(col, row) = hash01(seed, col, row, salt) * height_scale;
      // Blocky NDVI field covering all three classes plus no-data pockets.
      double u = hash01(seed, col / 3, row / 3, salt ^ 0xabcdef);
      double v;
      if (u < 0.06)
        v = ndvi.nodata;
      else
        v = (u - 0.06) / 0.94 * 1.3 - 0.3;  // [-0.3, 1.0]
      ndvi.value(col, row) = v;
    }
  }

  LabelRaster labels = register_labels(segment_ndvi(ndvi, NdviThresholds{}), dsm);
  return dsm_to_labeled_mesh(dsm, labels);
}

Fixture make_synthetic_city(const FixtureParams& p) {
  Fixture f;
  f.name = "synthetic-city";
  f.render = render_params(p);

  const double ground_half = 1200.0;
  LabeledMesh near_mesh = terrain_layer(p.seed, p.city_grid, ground_half, 3.0, 0x11);

  struct Box {
    Vec3 lo, hi;
  };
  std::vector<Box> boxes;
  for (int b = 0; b < p.city_boxes; ++b) {
    double cx = (hash01(p.seed, b, 0, 0x21) * 2.0 - 1.0) * (ground_half - 120.0);
    double cy = (hash01(p.seed, b, 1, 0x21) * 2.0 - 1.0) * (ground_half - 120.0);
    double wx = 8.0 + hash01(p.seed, b, 2, 0x21) * 22.0;
    double wy = 8.0 + hash01(p.seed, b, 3, 0x21) * 22.0;
    double h = 6.0 + hash01(p.seed, b, 4, 0x21) * 54.0;
    SemanticLabel label = hash01(p.seed, b, 5, 0x21) < 0.8 ? SemanticLabel::Construction
                                                           : SemanticLabel::Greenery;
    Box box{{cx - wx / 2, cy - wy / 2, -0.5}, {cx + wx / 2, cy + wy / 2, h}};
    append_box(near_mesh, box.lo, box.hi, label);
    boxes.push_back(box);
  }

  LabeledMesh far_mesh = terrain_layer(p.seed ^ 0x5eed, p.far_grid, 6000.0, 250.0, 0x31);

  f.scene = make_scene(std::move(near_mesh), std::move(far_mesh), 2000.0);

  char id[32];
  for (int w = 0; w < p.n_windows; ++w) {
    const Box& box = boxes.empty() ? Box{{-1, -1, 0}, {1, 1, 3}} : boxes[w % boxes.size()];
    Vec3 center = (box.lo + box.hi) * 0.5;
    double z = center.z;
    int face = w % 4;
    WindowSpec spec;
    std::snprintf(id, sizeof(id), "w%03d", w);
    spec.id = id;
    switch (face) {
      case 0:  // north face
        spec.position = {center.x, box.hi.y + 0.5, z};
        spec.heading_deg = 0.0;
        break;
      case 1:  // east face
        spec.position = {box.hi.x + 0.5, center.y, z};
        spec.heading_deg = 90.0;
        break;
      case 2:  // south face
        spec.position = {center.x, box.lo.y - 0.5, z};
        spec.heading_deg = 180.0;
        break;
      default:  // west face
        spec.position = {box.lo.x - 0.5, center.y, z};
        spec.heading_deg = 270.0;
        break;
    }
    f.windows.push_back(spec);
  }
  return f;
}

}  // namespace

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {"empty-sky", "full-wall", "half-wall",
                                                 "quad-split", "synthetic-city"};
  return names;
}

Fixture make_fixture(const std::string& name, const FixtureParams& params) {
  const double tv = std::tan(params.fov_deg * 0.5 * std::numbers::pi / 180.0);
  const WindowSpec window = default_window();
  const double cam_z = window.position.z;

  if (name == "empty-sky") {
    Fixture f;
    f.name = name;
    f.render = render_params(params);
    f.scene = make_scene(LabeledMesh{});
    f.windows = {window};
    f.expected = {{window.id, {0.0, 0.0, 1.0, 0.0}, {0.0, 0.0, 0.0, 0.0}}};
    return f;
  }

  if (name == "full-wall") {
    Fixture f;
    f.name = name;
    f.render = render_params(params);
    LabeledMesh lm;
    append_wall(lm, 10.0, -40.0, 40.0, cam_z - 40.0, cam_z + 40.0, SemanticLabel::Construction);
    f.scene = make_scene(std::move(lm));
    f.windows = {window};
    f.expected = {{window.id, {0.0, 0.0, 0.0, 1.0}, {0.0, 0.0, 0.0, 0.0}}};
    return f;
  }

  if (name == "half-wall") {
    Fixture f;
    f.name = name;
    f.render = render_params(params);
    LabeledMesh lm;
    // Right edge of the wall projects exactly onto the image centerline.
    append_wall(lm, 10.0, -40.0, 0.0, cam_z - 40.0, cam_z + 40.0, SemanticLabel::Construction);
    f.scene = make_scene(std::move(lm));
    f.windows = {window};
    double tol = 2.0 / params.width;
    f.expected = {{window.id, {0.0, 0.0, 0.5, 0.5}, {0.0, 0.0, tol, tol}}};
    return f;
  }

  if (name == "quad-split") {
    Fixture f;
    f.name = name;
    f.render = render_params(params);
    LabeledMesh lm;
    const double depth = 10.0;
    // Horizontal image quarters, top to bottom: construction, greenery,
    // waterbody, sky. Band edges are placed by projecting the quarter lines
    // y_ndc = 0.5 and 0 (horizon) onto the wall plane, and the ground quad's
    // near edge onto y_ndc = -0.5.
    const double band_split = cam_z + 0.5 * depth * tv;
    append_wall(lm, depth, -40.0, 40.0, band_split, band_split + 200.0,
                SemanticLabel::Construction);
    append_wall(lm, depth, -40.0, 40.0, cam_z, band_split, SemanticLabel::Greenery);
    // Water ground plane from the y_ndc = -0.5 ray's footprint out far
    // enough to reach the pixel row just under the horizon.
    const double y_near = cam_z / (0.5 * tv);
    append_quad(lm, {-2000.0, y_near, 0.0}, {2000.0, y_near, 0.0}, {2000.0, 2600.0, 0.0},
                {-2000.0, 2600.0, 0.0}, SemanticLabel::Waterbody);
    f.scene = make_scene(std::move(lm));
    f.windows = {window};
    f.expected = {{window.id,
                   {0.25, 0.25, 0.25, 0.25},
                   {0.01, 0.01, 0.01, 0.01}}};
    return f;
  }

  if (name == "synthetic-city") {
    return make_synthetic_city(params);
  }

  throw UnknownFixtureError("unknown fixture '" + name + "'");
}

void export_fixture(const Fixture& fixture, const std::string& dir) {
  std::filesystem::create_directories(dir);
  auto path = [&](const char* leaf) { return (std::filesystem::path(dir) / leaf).string(); };

  save_mesh(fixture.scene.near_mesh.mesh, &fixture.scene.near_mesh.vertex_labels,
            path("scene.ply"), PlyFormat::BinaryLittleEndian,
            &fixture.scene.near_mesh.triangle_labels);
  if (!fixture.scene.far_mesh.mesh.triangles.empty())
    save_mesh(fixture.scene.far_mesh.mesh, &fixture.scene.far_mesh.vertex_labels, path("far.ply"),
              PlyFormat::BinaryLittleEndian, &fixture.scene.far_mesh.triangle_labels);
  save_windows(fixture.windows, path("windows.csv"));

  if (!fixture.expected.empty()) {
    std::ofstream os(path("expected.csv"), std::ios::binary);
    if (!os) throw IoError(path("expected.csv") + ": cannot open for writing");
    os << "id,wvi_greenery,wvi_waterbody,wvi_sky,wvi_construction,"
          "tol_greenery,tol_waterbody,tol_sky,tol_construction\n";
    char buf[256];
    for (const auto& e : fixture.expected) {
      std::snprintf(buf, sizeof(buf), ",%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", e.wvi[0],
                    e.wvi[1], e.wvi[2], e.wvi[3], e.tolerance[0], e.tolerance[1], e.tolerance[2],
                    e.tolerance[3]);
      os << e.window_id << buf;
    }
  }

  std::ofstream os(path("params.ini"), std::ios::binary);
  if (!os) throw IoError(path("params.ini") + ": cannot open for writing");
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "fov=%.17g\nwidth=%d\nheight=%d\nnear=%.17g\nfar=%.17g\ncutoff=%.17g\n",
                fixture.render.fov_deg, fixture.render.width, fixture.render.height,
                fixture.render.near_m, fixture.render.far_m, fixture.scene.cutoff_m);
  os << buf;
}

}  // namespace wvi
