#pragma once

#include <array>
#include <string>
#include <vector>

#include "wvi/camera.hpp"
#include "wvi/image.hpp"
#include "wvi/render.hpp"
#include "wvi/windows_io.hpp"

namespace wvi {

// Exact per-label pixel counts for one image; ratios are derived on demand
// so the sum-to-one invariant holds on integers, not floats.
struct WviValues {
  std::array<uint64_t, kNumLabels> counts{};
  uint64_t total = 0;

  double ratio(SemanticLabel l) const {
    return total == 0 ? 0.0 : static_cast<double>(counts[static_cast<size_t>(l)]) / total;
  }
};

// Counts every pixel's palette label. A non-palette color throws
// UnknownColorError: the renderer contract was broken.
WviValues compute_wvi(const ViewImage& image);

WviRecord make_record(const std::string& window_id, const WviValues& values);

struct StepTiming {
  uint64_t windows = 0;
  double render_total_s = 0.0;
  double count_total_s = 0.0;
  double scene_prep_s = 0.0;  // one-off; filled by pipeline drivers

  double render_mean_s() const { return windows ? render_total_s / windows : 0.0; }
  double count_mean_s() const { return windows ? count_total_s / windows : 0.0; }
};

struct WindowFailure {
  std::string id;
  std::string message;
};

struct AssessmentReport {
  std::vector<WviRecord> records;  // manifest order
  std::vector<WindowFailure> failures;
  StepTiming timing;
};

struct AssessParams {
  RenderParams render;
  unsigned workers = 1;
  bool keep_going = false;
  std::string dump_dir;  // when non-empty, one PPM per window
};

// Renders and counts every window. Execution may be parallel; records land
// in manifest order and are a pure function of (scene, windows, params).
// Fail-fast by default; keep_going collects failures instead.
AssessmentReport assess_batch(const ColoredScene& scene, const std::vector<WindowSpec>& windows,
                              const AssessParams& params);

// Results CSV: id,wvi_greenery,wvi_waterbody,wvi_sky,wvi_construction with
// six decimals, manifest order.
void write_csv(const AssessmentReport& report, const std::string& path);
std::vector<WviRecord> read_csv(const std::string& path);

struct RmseReport {
  std::array<double, kNumLabels> per_label{};
  double average = 0.0;
};

// Per-label RMSE between two result sets paired by window id.
RmseReport rmse_compare(const std::vector<WviRecord>& a, const std::vector<WviRecord>& b);

std::string timing_text(const StepTiming& timing);
std::string timing_json(const StepTiming& timing);

// Deterministic dump filename for window `index` with the given id.
std::string dump_image_name(size_t index, const std::string& id);

}  // namespace wvi
