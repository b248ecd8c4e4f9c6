#include "wvi/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "wvi/error.hpp"
#include "wvi/stats.hpp"

namespace wvi {

namespace {

constexpr int kSubpixelBits = 8;
constexpr int64_t kSubpixelScale = 1 << kSubpixelBits;
constexpr int64_t kHalfPixel = kSubpixelScale / 2;

// Guard-band factor: clip planes sit at |ndc| = guard so snapped
// coordinates stay far inside int64-exact edge-function range.
double guard_factor(int width, int height) {
  double k = 5.0e5 / std::max(width, height) - 1.0;
  return std::clamp(k, 1.0, 63.0);
}

struct CamVertex {
  Vec3 p;  // camera space: x right, y up, z forward
};

struct ScreenVertex {
  int64_t x = 0;  // 1/256-pixel units
  int64_t y = 0;
  double invz = 0.0;
};

bool lex_less(const Vec3& a, const Vec3& b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  return a.z < b.z;
}

// Plane intersection evaluated from a canonical endpoint order, so the two
// triangles sharing a clipped edge get the bit-identical point.
template <typename PlaneFn>
Vec3 clip_point(const Vec3& a, const Vec3& b, PlaneFn plane) {
  const bool swap = lex_less(b, a);
  const Vec3& lo = swap ? b : a;
  const Vec3& hi = swap ? a : b;
  double dlo = plane(lo);
  double dhi = plane(hi);
  double t = dlo / (dlo - dhi);
  return lo + (hi - lo) * t;
}

template <typename PlaneFn>
void clip_polygon(std::vector<Vec3>& poly, std::vector<Vec3>& scratch, PlaneFn plane) {
  scratch.clear();
  size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec3& cur = poly[i];
    const Vec3& nxt = poly[(i + 1) % n];
    bool cur_in = plane(cur) >= 0.0;
    bool nxt_in = plane(nxt) >= 0.0;
    if (cur_in) scratch.push_back(cur);
    if (cur_in != nxt_in) scratch.push_back(clip_point(cur, nxt, plane));
  }
  poly.swap(scratch);
}

int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
}

int64_t ceil_div(int64_t a, int64_t b) { return -floor_div(-a, b); }

// Directed edge passes the top-left rule: horizontal with interior below
// (top) or interior to its right (left). Evaluated after winding
// normalization, with pixel y growing downward.
bool edge_top_left(int64_t dx, int64_t dy) { return (dy == 0 && dx > 0) || dy < 0; }

class Rasterizer {
 public:
  Rasterizer(const CameraPose& cam)
      : cam_(cam),
        basis_(camera_basis(cam)),
        guard_(guard_factor(cam.width, cam.height)),
        labels_(static_cast<size_t>(cam.width) * cam.height,
                static_cast<uint8_t>(label_code(SemanticLabel::Sky))),
        invz_(static_cast<size_t>(cam.width) * cam.height, 0.0) {}

  void draw_mesh(const LabeledMesh& lm, bool is_far_layer, double cutoff) {
    const Mesh& mesh = lm.mesh;
    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
      Vec3 centroid = mesh.triangle_centroid(t);
      double dist = length(centroid - cam_.position);
      if (!is_far_layer && dist > cutoff) continue;
      if (is_far_layer && dist < cutoff) continue;
      draw_triangle(mesh, t, lm.triangle_labels[t]);
    }
  }

  ViewImage finish() const {
    ViewImage img(cam_.width, cam_.height, label_to_color(SemanticLabel::Sky));
    for (size_t i = 0; i < labels_.size(); ++i)
      img.pixels[i] = label_to_color(static_cast<SemanticLabel>(labels_[i]));
    return img;
  }

 private:
  Vec3 to_camera(const Vec3& w) const {
    Vec3 d = w - cam_.position;
    return {dot(d, basis_.right), dot(d, basis_.up), dot(d, basis_.forward)};
  }

  ScreenVertex project(const Vec3& c) const {
    double px = (c.x / (c.z * basis_.tan_half_h) + 1.0) * (0.5 * cam_.width);
    double py = (1.0 - c.y / (c.z * basis_.tan_half_v)) * (0.5 * cam_.height);
    ScreenVertex s;
    s.x = static_cast<int64_t>(std::llround(px * kSubpixelScale));
    s.y = static_cast<int64_t>(std::llround(py * kSubpixelScale));
    s.invz = 1.0 / c.z;
    return s;
  }

  void draw_triangle(const Mesh& mesh, size_t t, SemanticLabel label) {
    const auto& tri = mesh.triangles[t];
    std::array<Vec3, 3> cam_verts = {to_camera(mesh.vertices[tri[0]]),
                                     to_camera(mesh.vertices[tri[1]]),
                                     to_camera(mesh.vertices[tri[2]])};

    // Whole-triangle rejects against far plane and near plane.
    double zmin = std::min({cam_verts[0].z, cam_verts[1].z, cam_verts[2].z});
    double zmax = std::max({cam_verts[0].z, cam_verts[1].z, cam_verts[2].z});
    if (zmin > cam_.far_m) return;
    if (zmax < cam_.near_m) return;

    const double kx = guard_ * basis_.tan_half_h;
    const double ky = guard_ * basis_.tan_half_v;
    auto near_plane = [&](const Vec3& v) { return v.z - cam_.near_m; };
    auto pos_x = [&](const Vec3& v) { return kx * v.z - v.x; };
    auto neg_x = [&](const Vec3& v) { return kx * v.z + v.x; };
    auto pos_y = [&](const Vec3& v) { return ky * v.z - v.y; };
    auto neg_y = [&](const Vec3& v) { return ky * v.z + v.y; };

    bool inside = true;
    for (const Vec3& v : cam_verts) {
      if (near_plane(v) < 0.0 || pos_x(v) < 0.0 || neg_x(v) < 0.0 || pos_y(v) < 0.0 ||
          neg_y(v) < 0.0) {
        inside = false;
        break;
      }
    }

    if (inside) {
      fill(project(cam_verts[0]), project(cam_verts[1]), project(cam_verts[2]), label);
      return;
    }

    poly_.assign(cam_verts.begin(), cam_verts.end());
    clip_polygon(poly_, scratch_, near_plane);
    if (poly_.size() < 3) return;
    clip_polygon(poly_, scratch_, pos_x);
    if (poly_.size() < 3) return;
    clip_polygon(poly_, scratch_, neg_x);
    if (poly_.size() < 3) return;
    clip_polygon(poly_, scratch_, pos_y);
    if (poly_.size() < 3) return;
    clip_polygon(poly_, scratch_, neg_y);
    if (poly_.size() < 3) return;

    projected_.clear();
    for (const Vec3& v : poly_) projected_.push_back(project(v));
    for (size_t i = 1; i + 1 < projected_.size(); ++i)
      fill(projected_[0], projected_[i], projected_[i + 1], label);
  }

  void fill(ScreenVertex v0, ScreenVertex v1, ScreenVertex v2, SemanticLabel label) {
    int64_t orient = (v1.x - v0.x) * (v2.y - v0.y) - (v1.y - v0.y) * (v2.x - v0.x);
    if (orient == 0) return;
    if (orient < 0) {
      std::swap(v1, v2);
      orient = -orient;
    }

    int64_t min_x = std::min({v0.x, v1.x, v2.x});
    int64_t max_x = std::max({v0.x, v1.x, v2.x});
    int64_t min_y = std::min({v0.y, v1.y, v2.y});
    int64_t max_y = std::max({v0.y, v1.y, v2.y});

    // Pixel centers sit at 256*i + 128.
    int64_t i_min = std::max<int64_t>(0, ceil_div(min_x - kHalfPixel, kSubpixelScale));
    int64_t i_max = std::min<int64_t>(cam_.width - 1, floor_div(max_x - kHalfPixel, kSubpixelScale));
    int64_t j_min = std::max<int64_t>(0, ceil_div(min_y - kHalfPixel, kSubpixelScale));
    int64_t j_max = std::min<int64_t>(cam_.height - 1, floor_div(max_y - kHalfPixel, kSubpixelScale));
    if (i_min > i_max || j_min > j_max) return;

    struct Edge {
      int64_t dx, dy;   // directed edge vector
      int64_t base;     // value at pixel (i_min, j_min)
      bool top_left;
    };
    auto make_edge = [&](const ScreenVertex& a, const ScreenVertex& b) {
      Edge e;
      e.dx = b.x - a.x;
      e.dy = b.y - a.y;
      int64_t cx = i_min * kSubpixelScale + kHalfPixel;
      int64_t cy = j_min * kSubpixelScale + kHalfPixel;
      e.base = e.dx * (cy - a.y) - e.dy * (cx - a.x);
      e.top_left = edge_top_left(e.dx, e.dy);
      return e;
    };
    // e[0] opposite v2, e[1] opposite v0, e[2] opposite v1.
    std::array<Edge, 3> edges = {make_edge(v0, v1), make_edge(v1, v2), make_edge(v2, v0)};

    const double inv_orient = 1.0 / static_cast<double>(orient);
    const double w0 = v0.invz, w1 = v1.invz, w2 = v2.invz;

    for (int64_t j = j_min; j <= j_max; ++j) {
      int64_t row_off = j - j_min;
      int64_t e0 = edges[0].base + edges[0].dx * kSubpixelScale * row_off;
      int64_t e1 = edges[1].base + edges[1].dx * kSubpixelScale * row_off;
      int64_t e2 = edges[2].base + edges[2].dx * kSubpixelScale * row_off;
      size_t idx = static_cast<size_t>(j) * cam_.width + static_cast<size_t>(i_min);
      for (int64_t i = i_min; i <= i_max; ++i, ++idx) {
        bool in0 = e0 > 0 || (e0 == 0 && edges[0].top_left);
        bool in1 = e1 > 0 || (e1 == 0 && edges[1].top_left);
        bool in2 = e2 > 0 || (e2 == 0 && edges[2].top_left);
        if (in0 && in1 && in2) {
          double invz = (static_cast<double>(e1) * w0 + static_cast<double>(e2) * w1 +
                         static_cast<double>(e0) * w2) *
                        inv_orient;
          if (invz > invz_[idx]) {
            invz_[idx] = invz;
            labels_[idx] = static_cast<uint8_t>(label_code(label));
          }
        }
        e0 += -edges[0].dy * kSubpixelScale;
        e1 += -edges[1].dy * kSubpixelScale;
        e2 += -edges[2].dy * kSubpixelScale;
      }
    }
  }

  const CameraPose& cam_;
  CameraBasis basis_;
  double guard_;
  std::vector<uint8_t> labels_;
  std::vector<double> invz_;
  std::vector<Vec3> poly_;
  std::vector<Vec3> scratch_;
  std::vector<ScreenVertex> projected_;
};

}  // namespace

void ColoredScene::validate() const {
  if (!(cutoff_m > 0.0)) throw ValidationError("scene cutoff must be > 0");
  auto check = [](const LabeledMesh& lm, const char* what) {
    if (lm.vertex_labels.size() != lm.mesh.vertices.size() ||
        lm.triangle_labels.size() != lm.mesh.triangles.size())
      throw ValidationError(std::string(what) + ": label arrays do not match mesh");
    for (SemanticLabel l : lm.triangle_labels)
      if (l == SemanticLabel::Sky)
        throw ValidationError(std::string(what) + ": sky label on geometry");
  };
  check(near_mesh, "near mesh");
  check(far_mesh, "far mesh");
}

ColoredScene make_scene(LabeledMesh near_mesh, LabeledMesh far_mesh, double cutoff_m) {
  ColoredScene scene;
  scene.near_mesh = std::move(near_mesh);
  scene.far_mesh = std::move(far_mesh);
  scene.cutoff_m = cutoff_m;
  scene.validate();
  stats::counters().scene_builds.fetch_add(1);
  return scene;
}

ViewImage render_view(const ColoredScene& scene, const CameraPose& cam) {
  cam.validate();
  stats::counters().renders.fetch_add(1);
  Rasterizer raster(cam);
  raster.draw_mesh(scene.near_mesh, /*is_far_layer=*/false, scene.cutoff_m);
  raster.draw_mesh(scene.far_mesh, /*is_far_layer=*/true, scene.cutoff_m);
  return raster.finish();
}

}  // namespace wvi
