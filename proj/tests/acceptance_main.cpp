// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Quantitative bounds are fixed here, not tuned at run time.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wvi/distant.hpp"
#include "wvi/error.hpp"
#include "wvi/fixtures.hpp"
#include "wvi/kdtree.hpp"
#include "wvi/label_transfer.hpp"
#include "wvi/parallel.hpp"
#include "wvi/raycast.hpp"
#include "wvi/render.hpp"
#include "wvi/stats.hpp"
#include "wvi/wvi_engine.hpp"

using namespace wvi;

namespace {

int g_failures = 0;

void report(int num, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", num, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

template <typename Fn>
void run(int num, const std::string& name, Fn fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(num, name, false, std::string("exception: ") + e.what());
  }
}

struct PoolEntry {
  std::string tag;
  Fixture fixture;
};

// Shared scene pool: the four analytic fixtures, the default synthetic
// city, and 50 seeded random cities.
std::vector<PoolEntry> build_pool() {
  std::vector<PoolEntry> pool;
  for (const char* name : {"empty-sky", "full-wall", "half-wall", "quad-split"}) {
    pool.push_back({name, make_fixture(name)});
  }
  pool.push_back({"city-default", make_fixture("synthetic-city")});
  for (int s = 1; s <= 50; ++s) {
    FixtureParams p;
    p.seed = 1000 + s;
    p.city_boxes = 15;
    p.city_grid = 20;
    p.far_grid = 14;
    p.n_windows = 1;
    pool.push_back({"rand" + std::to_string(s), make_fixture("synthetic-city", p)});
  }
  return pool;
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct ScratchDir {
  std::filesystem::path path;
  explicit ScratchDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() / ("wvi_accept_" + tag);
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& leaf) const { return (path / leaf).string(); }
};

}  // namespace

// 1. Every rendered pixel maps to a palette label; the four WVIs sum to
//    exactly 1 per window (integer counts). Exact.
void criterion_closure(const std::vector<PoolEntry>& pool,
                       std::vector<std::vector<WviValues>>& raster_values) {
  size_t windows = 0;
  for (const PoolEntry& entry : pool) {
    std::vector<WviValues> per_window;
    for (const WindowSpec& w : entry.fixture.windows) {
      CameraPose cam = place_camera(w, entry.fixture.render);
      ViewImage img = render_view(entry.fixture.scene, cam);
      WviValues v = compute_wvi(img);  // throws on any non-palette pixel
      uint64_t sum = 0;
      for (uint64_t c : v.counts) sum += c;
      if (sum != v.total || v.total != img.pixel_count())
        throw std::runtime_error(entry.tag + "/" + w.id + ": counts do not sum to n");
      per_window.push_back(v);
      ++windows;
    }
    raster_values.push_back(std::move(per_window));
  }
  report(1, "four-color closure & normalization", true,
         std::to_string(windows) + " windows, exact");
}

// 2. Per-label RMSE between rasterizer and ray-cast oracle over the pool
//    <= 0.005 (inside the published < 0.01 error budget).
void criterion_oracle(const std::vector<PoolEntry>& pool,
                      const std::vector<std::vector<WviValues>>& raster_values) {
  std::vector<WviRecord> raster_records, oracle_records;
  unsigned workers = default_workers();
  for (size_t e = 0; e < pool.size(); ++e) {
    const Fixture& f = pool[e].fixture;
    RayCaster caster(f.scene);
    for (size_t wi = 0; wi < f.windows.size(); ++wi) {
      CameraPose cam = place_camera(f.windows[wi], f.render);
      std::string uid = pool[e].tag + "/" + f.windows[wi].id;
      raster_records.push_back(make_record(uid, raster_values[e][wi]));
      oracle_records.push_back(make_record(uid, compute_wvi(caster.render(cam, workers))));
    }
  }
  RmseReport rmse = rmse_compare(raster_records, oracle_records);
  double worst = 0.0;
  for (double v : rmse.per_label) worst = std::max(worst, v);
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "per-label RMSE (g=%.6f w=%.6f s=%.6f c=%.6f) over %zu windows, bound 0.005",
                rmse.per_label[0], rmse.per_label[1], rmse.per_label[2], rmse.per_label[3],
                raster_records.size());
  report(2, "oracle equivalence", worst <= 0.005, detail);
}

// 3. Analytic fixture values at the stated tolerances.
void criterion_fixtures() {
  bool pass = true;
  std::string detail;
  for (const char* name : {"empty-sky", "full-wall", "half-wall", "quad-split"}) {
    Fixture f = make_fixture(name);
    for (size_t wi = 0; wi < f.windows.size(); ++wi) {
      CameraPose cam = place_camera(f.windows[wi], f.render);
      WviValues v = compute_wvi(render_view(f.scene, cam));
      const FixtureExpectation& exp = f.expected[wi];
      for (SemanticLabel l : all_labels()) {
        size_t i = static_cast<size_t>(l);
        double err = std::abs(v.ratio(l) - exp.wvi[i]);
        if (err > exp.tolerance[i]) {
          pass = false;
          detail += std::string(name) + "/" + label_name(l) + " off by " + std::to_string(err) +
                    " (tol " + std::to_string(exp.tolerance[i]) + "); ";
        }
      }
    }
  }
  report(3, "analytic fixtures", pass, pass ? "empty-sky, full-wall, half-wall, quad-split" : detail);
}

// 4. NDVI segmentation boundary behavior with the default 0.1/0 thresholds.
void criterion_ndvi() {
  GeoRaster ndvi;
  ndvi.ncols = 6;
  ndvi.nrows = 1;
  ndvi.cellsize = 1.0;
  ndvi.nodata = -9999.0;
  ndvi.values = {0.2, 0.1, 0.05, 0.0, -0.3, -9999.0};
  LabelRaster out = segment_ndvi(ndvi, NdviThresholds{});
  const SemanticLabel expected[6] = {SemanticLabel::Greenery,  SemanticLabel::Construction,
                                     SemanticLabel::Construction, SemanticLabel::Construction,
                                     SemanticLabel::Waterbody, SemanticLabel::Waterbody};
  bool pass = true;
  for (int c = 0; c < 6; ++c)
    if (out.label(c, 0) != expected[c]) pass = false;
  report(4, "NDVI segmentation conformance", pass,
         "{0.2, 0.1, 0.05, 0.0, -0.3, no-data} -> {G, C, C, C, W, W}");
}

// 5. Exact nearest-neighbor equivalence against brute force on a 10k-point
//    cloud, and perfect round-trip label recovery on the two-box scene.
void criterion_transfer() {
  LabeledMesh scene;
  auto box = [&](const Vec3& lo, const Vec3& hi, SemanticLabel l) {
    Mesh m;
    m.vertices = {{lo.x, lo.y, lo.z}, {hi.x, lo.y, lo.z}, {hi.x, hi.y, lo.z}, {lo.x, hi.y, lo.z},
                  {lo.x, lo.y, hi.z}, {hi.x, lo.y, hi.z}, {hi.x, hi.y, hi.z}, {lo.x, hi.y, hi.z}};
    const std::array<std::array<uint32_t, 3>, 12> faces = {{{0, 1, 2}, {0, 2, 3},
                                                            {4, 5, 6}, {4, 6, 7},
                                                            {0, 1, 5}, {0, 5, 4},
                                                            {2, 3, 7}, {2, 7, 6},
                                                            {1, 2, 6}, {1, 6, 5},
                                                            {3, 0, 4}, {3, 4, 7}}};
    uint32_t base = static_cast<uint32_t>(scene.mesh.vertices.size());
    for (const Vec3& v : m.vertices) scene.mesh.vertices.push_back(v);
    for (const auto& fidx : faces)
      scene.mesh.triangles.push_back({fidx[0] + base, fidx[1] + base, fidx[2] + base});
    scene.vertex_labels.insert(scene.vertex_labels.end(), 8, l);
    scene.triangle_labels.insert(scene.triangle_labels.end(), 12, l);
  };
  box({0, 0, 0}, {4, 4, 4}, SemanticLabel::Construction);
  box({50, 0, 0}, {54, 4, 4}, SemanticLabel::Greenery);

  // 10,000-point cloud: sampled surface points fill up the budget.
  LabeledPointCloud cloud = sample_labeled_surface(scene, 100.0, 7);
  if (cloud.size() > 10000) {
    cloud.positions.resize(10000);
    cloud.labels.resize(10000);
  }

  KdTree3 tree(cloud.positions);
  bool nn_exact = true;
  for (const Vec3& q : scene.mesh.vertices)
    if (tree.nearest(q) != brute_force_nearest(cloud.positions, q)) nn_exact = false;
  // Additional off-surface queries.
  for (int i = 0; i < 2000 && nn_exact; ++i) {
    Vec3 q{std::fmod(i * 0.7331, 60.0), std::fmod(i * 1.177, 8.0) - 2.0,
           std::fmod(i * 0.913, 8.0) - 2.0};
    if (tree.nearest(q) != brute_force_nearest(cloud.positions, q)) nn_exact = false;
  }

  LabeledMesh via_tree = transfer_labels(scene.mesh, cloud, default_workers(), false);
  LabeledMesh via_brute = transfer_labels(scene.mesh, cloud, default_workers(), true);
  bool transfer_equal = via_tree.vertex_labels == via_brute.vertex_labels;

  LabeledPointCloud dense = sample_labeled_surface(scene, 100.0, 11);
  LabeledMesh recovered = transfer_labels(scene.mesh, dense);
  size_t wrong = 0;
  for (size_t i = 0; i < recovered.vertex_labels.size(); ++i)
    if (recovered.vertex_labels[i] != scene.vertex_labels[i]) ++wrong;

  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "nn exact=%s, kd/brute transfer equal=%s, round-trip errors=%zu/%zu",
                nn_exact ? "yes" : "no", transfer_equal ? "yes" : "no", wrong,
                recovered.vertex_labels.size());
  report(5, "label-transfer correctness", nn_exact && transfer_equal && wrong == 0, detail);
}

// 6. Two-step efficiency split on a >=100k-triangle city at 900x900:
//    quantification mean <= 25% of render mean; scene built exactly once.
void criterion_efficiency() {
  stats::reset();
  FixtureParams p;
  p.city_boxes = 2000;
  p.city_grid = 225;
  p.far_grid = 40;
  p.n_windows = 100;
  Fixture city = make_fixture("synthetic-city", p);
  size_t triangles = city.scene.triangle_count();
  if (triangles < 100000)
    throw std::runtime_error("synthetic city too small: " + std::to_string(triangles));

  AssessParams params;
  params.render = city.render;
  params.workers = default_workers();
  AssessmentReport rep = assess_batch(city.scene, city.windows, params);

  uint64_t builds = stats::counters().scene_builds.load();
  uint64_t renders = stats::counters().renders.load();
  double ratio = rep.timing.count_mean_s() / rep.timing.render_mean_s();
  bool pass = ratio <= 0.25 && builds == 1 && renders == 100 && rep.records.size() == 100;
  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "%zu triangles, render mean %.4fs, count mean %.4fs, ratio %.3f (bound 0.25), "
                "scene builds %llu, renders %llu",
                triangles, rep.timing.render_mean_s(), rep.timing.count_mean_s(), ratio,
                static_cast<unsigned long long>(builds), static_cast<unsigned long long>(renders));
  report(6, "efficiency split", pass, detail);
}

// 7. Byte-identical CSVs and dumped images across worker counts.
void criterion_determinism() {
  ScratchDir dir("det");
  FixtureParams p;
  p.city_boxes = 30;
  p.city_grid = 24;
  p.far_grid = 16;
  p.n_windows = 8;
  Fixture city = make_fixture("synthetic-city", p);

  auto run_once = [&](unsigned workers, const std::string& tag) {
    AssessParams params;
    params.render = city.render;
    params.workers = workers;
    params.dump_dir = dir.file(tag);
    AssessmentReport rep = assess_batch(city.scene, city.windows, params);
    write_csv(rep, dir.file(tag + ".csv"));
  };
  run_once(1, "w1");
  run_once(8, "w8");

  bool pass = read_bytes(dir.file("w1.csv")) == read_bytes(dir.file("w8.csv"));
  size_t images = 0;
  for (size_t i = 0; i < city.windows.size(); ++i) {
    std::string leaf = dump_image_name(i, city.windows[i].id);
    std::string a = read_bytes(dir.file("w1/" + leaf));
    std::string b = read_bytes(dir.file("w8/" + leaf));
    if (a.empty() || a != b) pass = false;
    ++images;
  }
  report(7, "determinism across worker counts", pass,
         "CSV + " + std::to_string(images) + " dumped images byte-identical");
}

// 8. Rotating the scene 90 degrees about a window while adding 90 to its
//    heading moves each WVI by at most 2*(w+h)/n.
void criterion_equivariance() {
  FixtureParams p;
  p.city_boxes = 25;
  p.city_grid = 24;
  p.far_grid = 16;
  p.n_windows = 1;
  Fixture city = make_fixture("synthetic-city", p);
  const WindowSpec w = city.windows[0];
  CameraPose cam = place_camera(w, city.render);

  WviValues before = compute_wvi(render_view(city.scene, cam));

  // Exact quarter turn about the window: (x,y) -> (y,-x) relative to it.
  auto rotate = [&](LabeledMesh& lm) {
    for (Vec3& v : lm.mesh.vertices) {
      double rx = v.x - w.position.x, ry = v.y - w.position.y;
      v.x = w.position.x + ry;
      v.y = w.position.y - rx;
    }
  };
  LabeledMesh near_rot = city.scene.near_mesh;
  LabeledMesh far_rot = city.scene.far_mesh;
  rotate(near_rot);
  rotate(far_rot);
  ColoredScene rotated = make_scene(std::move(near_rot), std::move(far_rot), city.scene.cutoff_m);

  WindowSpec turned = w;
  turned.heading_deg = std::fmod(w.heading_deg + 90.0, 360.0);
  CameraPose cam2 = place_camera(turned, city.render);
  WviValues after = compute_wvi(render_view(rotated, cam2));

  double n = static_cast<double>(city.render.width) * city.render.height;
  double bound = 2.0 * (city.render.width + city.render.height) / n;
  double worst = 0.0;
  for (SemanticLabel l : all_labels())
    worst = std::max(worst, std::abs(before.ratio(l) - after.ratio(l)));
  char detail[120];
  std::snprintf(detail, sizeof(detail), "max per-label delta %.6f, bound %.6f", worst, bound);
  report(8, "heading equivariance", worst <= bound, detail);
}

int main() {
  std::vector<PoolEntry> pool;
  std::vector<std::vector<WviValues>> raster_values;

  run(1, "four-color closure & normalization", [&] {
    pool = build_pool();
    criterion_closure(pool, raster_values);
  });
  run(2, "oracle equivalence", [&] {
    if (pool.empty()) throw std::runtime_error("pool unavailable");
    criterion_oracle(pool, raster_values);
  });
  run(3, "analytic fixtures", [] { criterion_fixtures(); });
  run(4, "NDVI segmentation conformance", [] { criterion_ndvi(); });
  run(5, "label-transfer correctness", [] { criterion_transfer(); });
  run(6, "efficiency split", [] { criterion_efficiency(); });
  run(7, "determinism across worker counts", [] { criterion_determinism(); });
  run(8, "heading equivariance", [] { criterion_equivariance(); });

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all 8 criteria passed\n");
  return 0;
}
