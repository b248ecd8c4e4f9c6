#include "wvi/wvi_engine.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "wvi/error.hpp"
#include "wvi/parallel.hpp"
#include "wvi/stats.hpp"

namespace wvi {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_wvi(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

WviValues compute_wvi(const ViewImage& image) {
  if (image.pixel_count() == 0) throw ValidationError("cannot compute WVIs of an empty image");
  stats::counters().wvi_counts.fetch_add(1);

  const Rgb8 green = label_to_color(SemanticLabel::Greenery);
  const Rgb8 water = label_to_color(SemanticLabel::Waterbody);
  const Rgb8 sky = label_to_color(SemanticLabel::Sky);
  const Rgb8 constr = label_to_color(SemanticLabel::Construction);

  WviValues values;
  values.total = image.pixel_count();
  for (const Rgb8& p : image.pixels) {
    if (p == green)
      ++values.counts[static_cast<size_t>(SemanticLabel::Greenery)];
    else if (p == water)
      ++values.counts[static_cast<size_t>(SemanticLabel::Waterbody)];
    else if (p == sky)
      ++values.counts[static_cast<size_t>(SemanticLabel::Sky)];
    else if (p == constr)
      ++values.counts[static_cast<size_t>(SemanticLabel::Construction)];
    else
      throw UnknownColorError("pixel color (" + std::to_string(p.r) + "," + std::to_string(p.g) +
                              "," + std::to_string(p.b) + ") is not in the palette");
  }
  return values;
}

WviRecord make_record(const std::string& window_id, const WviValues& values) {
  WviRecord rec;
  rec.window_id = window_id;
  rec.pixel_counts = values.counts;
  rec.total_pixels = values.total;
  rec.wvi_greenery = values.ratio(SemanticLabel::Greenery);
  rec.wvi_waterbody = values.ratio(SemanticLabel::Waterbody);
  rec.wvi_sky = values.ratio(SemanticLabel::Sky);
  rec.wvi_construction = values.ratio(SemanticLabel::Construction);
  return rec;
}

std::string dump_image_name(size_t index, const std::string& id) {
  std::string safe;
  safe.reserve(id.size());
  for (char c : id) {
    bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              c == '-' || c == '.' || c == '_';
    safe.push_back(ok ? c : '_');
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06zu_", index);
  return std::string(buf) + safe + ".ppm";
}

AssessmentReport assess_batch(const ColoredScene& scene, const std::vector<WindowSpec>& windows,
                              const AssessParams& params) {
  scene.validate();
  if (!params.dump_dir.empty()) std::filesystem::create_directories(params.dump_dir);

  const size_t n = windows.size();
  std::vector<WviRecord> records(n);
  std::vector<double> render_s(n, 0.0), count_s(n, 0.0);
  std::vector<std::string> errors(n);

  parallel_for(n, params.workers, [&](size_t i) {
    const WindowSpec& w = windows[i];
    try {
      CameraPose cam = place_camera(w, params.render);

      auto t0 = Clock::now();
      ViewImage img = render_view(scene, cam);
      render_s[i] = seconds_since(t0);

      auto t1 = Clock::now();
      WviValues values = compute_wvi(img);
      count_s[i] = seconds_since(t1);

      records[i] = make_record(w.id, values);
      if (!params.dump_dir.empty()) {
        save_ppm(img, (std::filesystem::path(params.dump_dir) / dump_image_name(i, w.id)).string());
      }
    } catch (const std::exception& e) {
      if (!params.keep_going) throw IoError("window '" + w.id + "': " + e.what());
      errors[i] = e.what();
    }
  });

  AssessmentReport report;
  report.records.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    if (!errors[i].empty()) {
      report.failures.push_back({windows[i].id, errors[i]});
      continue;
    }
    report.records.push_back(std::move(records[i]));
    report.timing.render_total_s += render_s[i];
    report.timing.count_total_s += count_s[i];
  }
  report.timing.windows = report.records.size();
  return report;
}

void write_csv(const AssessmentReport& report, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError(path + ": cannot open for writing");
  os << "id,wvi_greenery,wvi_waterbody,wvi_sky,wvi_construction\n";
  for (const WviRecord& r : report.records) {
    os << r.window_id << ',' << format_wvi(r.wvi_greenery) << ',' << format_wvi(r.wvi_waterbody)
       << ',' << format_wvi(r.wvi_sky) << ',' << format_wvi(r.wvi_construction) << '\n';
  }
  if (!os) throw IoError(path + ": write failed");
}

std::vector<WviRecord> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::vector<WviRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "id,wvi_greenery,wvi_waterbody,wvi_sky,wvi_construction")
        throw ParseError(path + ": unexpected results header");
      continue;
    }
    std::istringstream ss(line);
    std::string field;
    WviRecord rec;
    if (!std::getline(ss, rec.window_id, ',')) throw ParseError(path + ": bad row " + line);
    double* slots[4] = {&rec.wvi_greenery, &rec.wvi_waterbody, &rec.wvi_sky,
                        &rec.wvi_construction};
    for (double* slot : slots) {
      if (!std::getline(ss, field, ','))
        throw ParseError(path + ":" + std::to_string(line_no) + ": expected 5 fields");
      auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), *slot);
      if (ec != std::errc{} || p != field.data() + field.size())
        throw ParseError(path + ":" + std::to_string(line_no) + ": bad number '" + field + "'");
    }
    records.push_back(std::move(rec));
  }
  return records;
}

RmseReport rmse_compare(const std::vector<WviRecord>& a, const std::vector<WviRecord>& b) {
  if (a.size() != b.size())
    throw IdMismatchError("result sets differ in size: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
  if (a.empty()) throw IdMismatchError("cannot compare empty result sets");

  std::unordered_map<std::string, const WviRecord*> by_id;
  for (const WviRecord& r : b) by_id[r.window_id] = &r;

  std::array<double, kNumLabels> sq_sum{};
  for (const WviRecord& ra : a) {
    auto it = by_id.find(ra.window_id);
    if (it == by_id.end()) throw IdMismatchError("window '" + ra.window_id + "' missing from b");
    const WviRecord& rb = *it->second;
    for (SemanticLabel l : all_labels()) {
      double d = ra.value(l) - rb.value(l);
      sq_sum[static_cast<size_t>(l)] += d * d;
    }
  }

  RmseReport report;
  for (size_t i = 0; i < kNumLabels; ++i) {
    report.per_label[i] = std::sqrt(sq_sum[i] / a.size());
    report.average += report.per_label[i];
  }
  report.average /= kNumLabels;
  return report;
}

std::string timing_text(const StepTiming& timing) {
  std::ostringstream os;
  char buf[64];
  os << "windows         " << timing.windows << "\n";
  std::snprintf(buf, sizeof(buf), "%.6f", timing.render_total_s);
  os << "render_total_s  " << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.6f", timing.render_mean_s());
  os << "render_mean_s   " << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.6f", timing.count_total_s);
  os << "count_total_s   " << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.6f", timing.count_mean_s());
  os << "count_mean_s    " << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.6f", timing.scene_prep_s);
  os << "scene_prep_s    " << buf << "\n";
  return os.str();
}

std::string timing_json(const StepTiming& timing) {
  nlohmann::json j;
  j["windows"] = timing.windows;
  j["render_total_s"] = timing.render_total_s;
  j["render_mean_s"] = timing.render_mean_s();
  j["count_total_s"] = timing.count_total_s;
  j["count_mean_s"] = timing.count_mean_s();
  j["scene_prep_s"] = timing.scene_prep_s;
  return j.dump(2) + "\n";
}

}  // namespace wvi
