#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

#include "wvi/label_transfer.hpp"
#include "wvi/mesh.hpp"

namespace wvi::test {

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<uint64_t> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("wvi_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& leaf) const { return (path_ / leaf).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary);
  os << contents;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void add_quad(LabeledMesh& lm, const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d,
                     SemanticLabel label) {
  uint32_t base = static_cast<uint32_t>(lm.mesh.vertices.size());
  lm.mesh.vertices.insert(lm.mesh.vertices.end(), {a, b, c, d});
  lm.vertex_labels.insert(lm.vertex_labels.end(), 4, label);
  lm.mesh.triangles.push_back({base, base + 1, base + 2});
  lm.mesh.triangles.push_back({base, base + 2, base + 3});
  lm.triangle_labels.insert(lm.triangle_labels.end(), 2, label);
}

// Axis-aligned box with all six faces labeled `label`.
inline void add_box(LabeledMesh& lm, const Vec3& lo, const Vec3& hi, SemanticLabel label) {
  add_quad(lm, {lo.x, lo.y, lo.z}, {hi.x, lo.y, lo.z}, {hi.x, lo.y, hi.z}, {lo.x, lo.y, hi.z},
           label);
  add_quad(lm, {hi.x, hi.y, lo.z}, {lo.x, hi.y, lo.z}, {lo.x, hi.y, hi.z}, {hi.x, hi.y, hi.z},
           label);
  add_quad(lm, {lo.x, hi.y, lo.z}, {lo.x, lo.y, lo.z}, {lo.x, lo.y, hi.z}, {lo.x, hi.y, hi.z},
           label);
  add_quad(lm, {hi.x, lo.y, lo.z}, {hi.x, hi.y, lo.z}, {hi.x, hi.y, hi.z}, {hi.x, lo.y, hi.z},
           label);
  add_quad(lm, {lo.x, lo.y, hi.z}, {hi.x, lo.y, hi.z}, {hi.x, hi.y, hi.z}, {lo.x, hi.y, hi.z},
           label);
  add_quad(lm, {lo.x, lo.y, lo.z}, {lo.x, hi.y, lo.z}, {hi.x, hi.y, lo.z}, {hi.x, lo.y, lo.z},
           label);
}

// Scattered non-intersecting boxes in front of a north-facing camera at the
// origin; labels cycle over the three geometry classes.
inline LabeledMesh random_box_scene(uint64_t seed, int n_boxes) {
  std::mt19937_64 rng(seed);
  auto uni = [&](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };
  const SemanticLabel labels[3] = {SemanticLabel::Greenery, SemanticLabel::Waterbody,
                                   SemanticLabel::Construction};
  LabeledMesh lm;
  for (int b = 0; b < n_boxes; ++b) {
    double cx = uni(-60, 60);
    double cy = uni(15, 160);
    double cz = uni(-10, 25);
    double sx = uni(1, 9), sy = uni(1, 9), sz = uni(1, 14);
    add_box(lm, {cx - sx / 2, cy - sy / 2, cz - sz / 2}, {cx + sx / 2, cy + sy / 2, cz + sz / 2},
            labels[b % 3]);
  }
  return lm;
}

}  // namespace wvi::test
