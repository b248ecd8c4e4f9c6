#include "wvi/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "wvi/asc_io.hpp"
#include "wvi/distant.hpp"
#include "wvi/error.hpp"
#include "wvi/fixtures.hpp"
#include "wvi/label_transfer.hpp"
#include "wvi/parallel.hpp"
#include "wvi/ply_io.hpp"
#include "wvi/raycast.hpp"
#include "wvi/wvi_engine.hpp"

namespace wvi {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct RunConfig {
  // inputs
  std::string mesh_path;
  std::string cloud_path;
  std::string dsm_path;
  std::string ndvi_path;
  std::string windows_path;
  std::string near_mesh_path;
  std::string far_mesh_path;
  std::string fixture;

  // thresholds
  NdviThresholds thresholds;

  // camera
  RenderParams render;
  double cutoff_m = 2000.0;

  // sampling
  double density = 100.0;
  uint64_t seed = 1;

  // execution
  unsigned workers = default_workers();
  bool keep_going = false;
  bool use_oracle = false;

  // outputs
  std::string out_path;
  std::string out_near;
  std::string out_far;
  std::string out_dir;
  std::string dump_dir;
  std::string timing_json_path;
  std::string sampled_cloud_path;

  // fixture knobs
  FixtureParams fixture_params;
  int windows_count = 0;
};

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw ValidationError(std::string(what) + " path is required");
  if (!std::filesystem::exists(path))
    throw ValidationError(std::string(what) + " file does not exist: " + path);
}

void add_camera_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--fov", cfg.render.fov_deg, "vertical field of view, degrees");
  cmd->add_option("--width", cfg.render.width, "image width, pixels");
  cmd->add_option("--height", cfg.render.height, "image height, pixels");
  cmd->add_option("--near", cfg.render.near_m, "near clip distance, meters");
  cmd->add_option("--far", cfg.render.far_m, "far clip distance, meters");
  cmd->add_option("--cutoff", cfg.cutoff_m, "near/far layer cutoff distance, meters");
}

void add_fixture_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--fixture", cfg.fixture, "use a built-in fixture scene");
  cmd->add_option("--seed", cfg.fixture_params.seed, "fixture generator seed");
  cmd->add_option("--boxes", cfg.fixture_params.city_boxes, "synthetic-city building count");
  cmd->add_option("--grid", cfg.fixture_params.city_grid, "synthetic-city terrain nodes per side");
  cmd->add_option("--far-grid", cfg.fixture_params.far_grid,
                  "synthetic-city far terrain nodes per side");
  cmd->add_option("--fixture-windows", cfg.fixture_params.n_windows, "fixture window count");
}

void validate_config(const RunConfig& cfg) {
  CameraPose probe;
  probe.fov_deg = cfg.render.fov_deg;
  probe.width = cfg.render.width;
  probe.height = cfg.render.height;
  probe.near_m = cfg.render.near_m;
  probe.far_m = cfg.render.far_m;
  probe.validate();
  cfg.thresholds.validate();
  if (!(cfg.cutoff_m > 0.0)) throw ValidationError("cutoff must be > 0");
  if (!(cfg.density > 0.0)) throw ValidationError("density must be > 0");
  if (cfg.workers == 0) throw ValidationError("workers must be >= 1");
}

LabeledMesh load_labeled_mesh(const std::string& path) {
  MeshLoadResult loaded = load_mesh(path);
  if (!loaded.vertex_labels)
    throw ValidationError(path + ": mesh has no label property; run build-scene first");
  if (loaded.degenerate_dropped > 0)
    std::cerr << "warning: " << path << ": dropped " << loaded.degenerate_dropped
              << " degenerate triangle(s)\n";
  if (loaded.triangle_labels)
    return make_labeled_mesh(std::move(loaded.mesh), std::move(*loaded.vertex_labels),
                             std::move(*loaded.triangle_labels));
  return make_labeled_mesh(std::move(loaded.mesh), std::move(*loaded.vertex_labels));
}

// Assembles the scene either from built mesh files or from a fixture.
// Returns the windows to assess alongside (manifest wins over fixture).
struct PreparedScene {
  ColoredScene scene;
  std::vector<WindowSpec> windows;
  double prep_seconds = 0.0;
};

PreparedScene prepare_scene(RunConfig& cfg) {
  auto t0 = Clock::now();
  PreparedScene out;
  if (!cfg.fixture.empty()) {
    cfg.fixture_params.width = cfg.render.width;
    cfg.fixture_params.height = cfg.render.height;
    cfg.fixture_params.fov_deg = cfg.render.fov_deg;
    cfg.fixture_params.near_m = cfg.render.near_m;
    cfg.fixture_params.far_m = cfg.render.far_m;
    Fixture f = make_fixture(cfg.fixture, cfg.fixture_params);
    out.scene = std::move(f.scene);
    out.windows = std::move(f.windows);
  } else {
    require_file(cfg.near_mesh_path, "near mesh");
    LabeledMesh near_mesh = load_labeled_mesh(cfg.near_mesh_path);
    LabeledMesh far_mesh;
    if (!cfg.far_mesh_path.empty()) {
      require_file(cfg.far_mesh_path, "far mesh");
      far_mesh = load_labeled_mesh(cfg.far_mesh_path);
    }
    out.scene = make_scene(std::move(near_mesh), std::move(far_mesh), cfg.cutoff_m);
  }
  if (!cfg.windows_path.empty()) {
    require_file(cfg.windows_path, "windows");
    out.windows = load_windows(cfg.windows_path);
  }
  if (out.windows.empty() && cfg.windows_path.empty() && cfg.fixture.empty())
    throw ValidationError("a windows manifest is required (--windows)");
  out.prep_seconds = seconds_since(t0);
  return out;
}

int cmd_segment_ndvi(RunConfig& cfg) {
  validate_config(cfg);
  require_file(cfg.ndvi_path, "NDVI raster");
  if (cfg.out_path.empty()) throw ValidationError("--out path is required");

  GeoRaster ndvi = load_raster(cfg.ndvi_path);
  LabelRaster labels = segment_ndvi(ndvi, cfg.thresholds);
  if (!cfg.dsm_path.empty()) {
    require_file(cfg.dsm_path, "DSM raster");
    GeoRaster dsm = load_raster(cfg.dsm_path);
    labels = register_labels(labels, dsm);
  }
  save_raster(label_raster_to_grid(labels), cfg.out_path);
  std::cout << "wrote " << cfg.out_path << " (" << labels.grid.ncols << "x" << labels.grid.nrows
            << " cells)\n";
  return 0;
}

int cmd_build_scene(RunConfig& cfg) {
  validate_config(cfg);
  require_file(cfg.mesh_path, "mesh");
  if (cfg.out_near.empty()) throw ValidationError("--out-near path is required");

  MeshLoadResult loaded = load_mesh(cfg.mesh_path);
  if (loaded.degenerate_dropped > 0)
    std::cerr << "warning: dropped " << loaded.degenerate_dropped << " degenerate triangle(s)\n";

  LabeledMesh near_mesh;
  if (loaded.vertex_labels) {
    if (loaded.triangle_labels)
      near_mesh = make_labeled_mesh(std::move(loaded.mesh), std::move(*loaded.vertex_labels),
                                    std::move(*loaded.triangle_labels));
    else
      near_mesh = make_labeled_mesh(std::move(loaded.mesh), std::move(*loaded.vertex_labels));
  } else {
    if (cfg.cloud_path.empty())
      throw ValidationError("label source required: mesh is unlabeled and no --cloud given");
    require_file(cfg.cloud_path, "point cloud");
    LabeledPointCloud cloud = load_point_cloud(cfg.cloud_path);
    near_mesh = transfer_labels(loaded.mesh, cloud, cfg.workers);
  }
  save_mesh(near_mesh.mesh, &near_mesh.vertex_labels, cfg.out_near,
            PlyFormat::BinaryLittleEndian, &near_mesh.triangle_labels);
  std::cout << "wrote " << cfg.out_near << " (" << near_mesh.mesh.triangles.size()
            << " triangles)\n";

  if (!cfg.sampled_cloud_path.empty()) {
    LabeledPointCloud sampled = sample_labeled_surface(near_mesh, cfg.density, cfg.seed);
    save_point_cloud(sampled, cfg.sampled_cloud_path);
    std::cout << "wrote " << cfg.sampled_cloud_path << " (" << sampled.size() << " points)\n";
  }

  if (!cfg.dsm_path.empty() || !cfg.ndvi_path.empty()) {
    if (cfg.out_far.empty()) throw ValidationError("--out-far path is required with --dsm/--ndvi");
    require_file(cfg.dsm_path, "DSM raster");
    require_file(cfg.ndvi_path, "NDVI raster");
    GeoRaster dsm = load_raster(cfg.dsm_path);
    GeoRaster ndvi = load_raster(cfg.ndvi_path);
    LabelRaster labels = register_labels(segment_ndvi(ndvi, cfg.thresholds), dsm);
    LabeledMesh far_mesh = dsm_to_labeled_mesh(dsm, labels);
    save_mesh(far_mesh.mesh, &far_mesh.vertex_labels, cfg.out_far,
              PlyFormat::BinaryLittleEndian, &far_mesh.triangle_labels);
    std::cout << "wrote " << cfg.out_far << " (" << far_mesh.mesh.triangles.size()
              << " triangles)\n";
  }
  return 0;
}

int cmd_assess(RunConfig& cfg) {
  validate_config(cfg);
  if (cfg.out_path.empty()) throw ValidationError("--out path is required");

  PreparedScene prepared = prepare_scene(cfg);

  AssessParams params;
  params.render = cfg.render;
  params.workers = cfg.workers;
  params.keep_going = cfg.keep_going;
  params.dump_dir = cfg.dump_dir;

  AssessmentReport report = assess_batch(prepared.scene, prepared.windows, params);
  report.timing.scene_prep_s = prepared.prep_seconds;
  write_csv(report, cfg.out_path);

  std::cout << timing_text(report.timing);
  if (!cfg.timing_json_path.empty()) {
    std::ofstream os(cfg.timing_json_path, std::ios::binary);
    if (!os) throw IoError(cfg.timing_json_path + ": cannot open for writing");
    os << timing_json(report.timing);
  }

  if (cfg.use_oracle) {
    RayCaster caster(prepared.scene);
    AssessmentReport oracle;
    for (size_t i = 0; i < prepared.windows.size(); ++i) {
      const WindowSpec& w = prepared.windows[i];
      CameraPose cam = place_camera(w, cfg.render);
      ViewImage img = caster.render(cam, cfg.workers);
      oracle.records.push_back(make_record(w.id, compute_wvi(img)));
    }
    RmseReport rmse = rmse_compare(report.records, oracle.records);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "oracle_rmse greenery=%.6f waterbody=%.6f sky=%.6f construction=%.6f "
                  "average=%.6f\n",
                  rmse.per_label[0], rmse.per_label[1], rmse.per_label[2], rmse.per_label[3],
                  rmse.average);
    std::cout << buf;
  }

  for (const WindowFailure& f : report.failures)
    std::cerr << "window '" << f.id << "' failed: " << f.message << "\n";
  return report.failures.empty() ? 0 : 2;
}

int cmd_bench(RunConfig& cfg) {
  validate_config(cfg);
  if (cfg.fixture.empty() && cfg.near_mesh_path.empty())
    throw ValidationError("bench needs --fixture or --near-mesh");
  if (cfg.windows_count > 0) cfg.fixture_params.n_windows = cfg.windows_count;

  PreparedScene prepared = prepare_scene(cfg);
  if (cfg.windows_count > 0 && prepared.windows.size() > static_cast<size_t>(cfg.windows_count))
    prepared.windows.resize(cfg.windows_count);

  AssessParams params;
  params.render = cfg.render;
  params.workers = cfg.workers;

  AssessmentReport report = assess_batch(prepared.scene, prepared.windows, params);
  report.timing.scene_prep_s = prepared.prep_seconds;

  std::cout << "scene_triangles " << prepared.scene.triangle_count() << "\n"
            << timing_text(report.timing);
  if (report.timing.windows > 0) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "prep_per_window %.6f\ncount_over_render %.4f\n",
                  report.timing.scene_prep_s / report.timing.windows,
                  report.timing.render_mean_s() > 0.0
                      ? report.timing.count_mean_s() / report.timing.render_mean_s()
                      : 0.0);
    std::cout << buf;
  }
  if (!cfg.timing_json_path.empty()) {
    std::ofstream os(cfg.timing_json_path, std::ios::binary);
    if (!os) throw IoError(cfg.timing_json_path + ": cannot open for writing");
    os << timing_json(report.timing);
  }
  if (!cfg.out_path.empty()) write_csv(report, cfg.out_path);
  return 0;
}

int cmd_fixtures(RunConfig& cfg) {
  validate_config(cfg);
  if (cfg.out_dir.empty()) throw ValidationError("--out-dir path is required");
  cfg.fixture_params.width = cfg.render.width;
  cfg.fixture_params.height = cfg.render.height;
  cfg.fixture_params.fov_deg = cfg.render.fov_deg;
  cfg.fixture_params.near_m = cfg.render.near_m;
  cfg.fixture_params.far_m = cfg.render.far_m;

  std::vector<std::string> names;
  if (!cfg.fixture.empty())
    names.push_back(cfg.fixture);
  else
    names = fixture_names();

  for (const std::string& name : names) {
    Fixture f = make_fixture(name, cfg.fixture_params);
    std::string dir = (std::filesystem::path(cfg.out_dir) / name).string();
    export_fixture(f, dir);
    std::cout << "wrote fixture '" << name << "' to " << dir << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"window view index batch engine"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value config file; command-line flags win");

  RunConfig cfg;

  CLI::App* seg = app.add_subcommand("segment-ndvi", "classify an NDVI raster into view labels");
  seg->add_option("--ndvi", cfg.ndvi_path, "NDVI raster (.asc)");
  seg->add_option("--dsm", cfg.dsm_path, "optional DSM raster to register labels onto");
  seg->add_option("--out", cfg.out_path, "output label raster (.asc)");
  seg->add_option("--greenery-min", cfg.thresholds.greenery_min,
                  "NDVI above this is greenery (default 0.1)");
  seg->add_option("--construction-min", cfg.thresholds.construction_min,
                  "NDVI from this to greenery-min is construction (default 0)");

  CLI::App* build = app.add_subcommand("build-scene", "label a mesh and mesh the DSM layer");
  build->add_option("--mesh", cfg.mesh_path, "input mesh (.ply), labeled or not");
  build->add_option("--cloud", cfg.cloud_path, "labeled point cloud (.ply) for label transfer");
  build->add_option("--dsm", cfg.dsm_path, "DSM raster for the far layer");
  build->add_option("--ndvi", cfg.ndvi_path, "NDVI raster for far-layer labels");
  build->add_option("--out-near", cfg.out_near, "output labeled near mesh (.ply)");
  build->add_option("--out-far", cfg.out_far, "output labeled far mesh (.ply)");
  build->add_option("--emit-sampled-cloud", cfg.sampled_cloud_path,
                    "also write a labeled surface sample of the near mesh");
  build->add_option("--density", cfg.density, "surface sampling density, points/m^2");
  build->add_option("--seed", cfg.seed, "sampling seed");
  build->add_option("--workers", cfg.workers, "worker thread count");
  build->add_option("--greenery-min", cfg.thresholds.greenery_min, "NDVI greenery threshold");
  build->add_option("--construction-min", cfg.thresholds.construction_min,
                    "NDVI construction threshold");

  CLI::App* assess = app.add_subcommand("assess", "render every window and compute WVIs");
  assess->add_option("--near-mesh", cfg.near_mesh_path, "labeled near mesh (.ply)");
  assess->add_option("--far-mesh", cfg.far_mesh_path, "labeled far mesh (.ply)");
  assess->add_option("--windows", cfg.windows_path, "window manifest (.csv)");
  assess->add_option("--out", cfg.out_path, "output results CSV");
  assess->add_option("--timing-json", cfg.timing_json_path, "write the timing block as JSON");
  assess->add_option("--dump-images", cfg.dump_dir, "directory for per-window PPM dumps");
  assess->add_option("--workers", cfg.workers, "worker thread count");
  assess->add_flag("--keep-going", cfg.keep_going, "record per-window failures and continue");
  assess->add_flag("--use-oracle", cfg.use_oracle,
                   "also ray-cast every window and report the per-label RMSE");
  add_camera_options(assess, cfg);
  add_fixture_options(assess, cfg);

  CLI::App* bench = app.add_subcommand("bench", "time view generation vs WVI quantification");
  bench->add_option("--near-mesh", cfg.near_mesh_path, "labeled near mesh (.ply)");
  bench->add_option("--far-mesh", cfg.far_mesh_path, "labeled far mesh (.ply)");
  bench->add_option("--windows", cfg.windows_path, "window manifest (.csv)");
  bench->add_option("--windows-count", cfg.windows_count, "number of windows to render");
  bench->add_option("--out", cfg.out_path, "optional results CSV");
  bench->add_option("--timing-json", cfg.timing_json_path, "write the timing block as JSON");
  bench->add_option("--workers", cfg.workers, "worker thread count");
  add_camera_options(bench, cfg);
  add_fixture_options(bench, cfg);

  CLI::App* fixtures = app.add_subcommand("fixtures", "write built-in fixture scenes to disk");
  fixtures->add_option("--name", cfg.fixture, "one fixture name (default: all)");
  fixtures->add_option("--out-dir", cfg.out_dir, "output directory");
  fixtures->add_option("--seed", cfg.fixture_params.seed, "fixture generator seed");
  fixtures->add_option("--boxes", cfg.fixture_params.city_boxes, "synthetic-city building count");
  fixtures->add_option("--grid", cfg.fixture_params.city_grid,
                       "synthetic-city terrain nodes per side");
  fixtures->add_option("--fixture-windows", cfg.fixture_params.n_windows, "fixture window count");
  add_camera_options(fixtures, cfg);

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (seg->parsed()) return cmd_segment_ndvi(cfg);
    if (build->parsed()) return cmd_build_scene(cfg);
    if (assess->parsed()) return cmd_assess(cfg);
    if (bench->parsed()) return cmd_bench(cfg);
    if (fixtures->parsed()) return cmd_fixtures(cfg);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace wvi
