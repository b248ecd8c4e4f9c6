#include "wvi/raycast.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "wvi/parallel.hpp"
#include "wvi/stats.hpp"

namespace wvi {

namespace {

constexpr uint32_t kLeafSize = 4;

struct TriHit {
  double t;  // forward depth (dir has unit forward component)
  bool ok;
};

// Non-culling Moller-Trumbore with inclusive barycentric boundaries, so
// shared-edge rays register on both triangles and the index tie rule
// decides.
TriHit intersect(const Vec3& origin, const Vec3& dir, const Vec3& a, const Vec3& b,
                 const Vec3& c) {
  Vec3 e1 = b - a;
  Vec3 e2 = c - a;
  Vec3 pvec = cross(dir, e2);
  double det = dot(e1, pvec);
  if (det == 0.0) return {0.0, false};
  double inv_det = 1.0 / det;
  Vec3 tvec = origin - a;
  double u = dot(tvec, pvec) * inv_det;
  if (u < 0.0 || u > 1.0) return {0.0, false};
  Vec3 qvec = cross(tvec, e1);
  double v = dot(dir, qvec) * inv_det;
  if (v < 0.0 || u + v > 1.0) return {0.0, false};
  return {dot(e2, qvec) * inv_det, true};
}

bool slab_hit(const Vec3& lo, const Vec3& hi, const Vec3& origin, const Vec3& dir, double t_near,
              double t_best, double& t_entry) {
  double tmin = t_near;
  double tmax = std::numeric_limits<double>::infinity();
  const double o[3] = {origin.x, origin.y, origin.z};
  const double d[3] = {dir.x, dir.y, dir.z};
  const double l[3] = {lo.x, lo.y, lo.z};
  const double h[3] = {hi.x, hi.y, hi.z};
  for (int axis = 0; axis < 3; ++axis) {
    if (d[axis] != 0.0) {
      double t1 = (l[axis] - o[axis]) / d[axis];
      double t2 = (h[axis] - o[axis]) / d[axis];
      if (t1 > t2) std::swap(t1, t2);
      tmin = std::max(tmin, t1);
      tmax = std::min(tmax, t2);
    } else if (o[axis] < l[axis] || o[axis] > h[axis]) {
      return false;
    }
  }
  if (tmin > tmax) return false;
  if (tmin > t_best) return false;  // cannot beat or tie the current best
  t_entry = tmin;
  return true;
}

}  // namespace

RayCaster::RayCaster(const ColoredScene& scene) : cutoff_m_(scene.cutoff_m) {
  auto append = [&](const LabeledMesh& lm, bool is_far) {
    const Mesh& mesh = lm.mesh;
    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
      const auto& tri = mesh.triangles[t];
      tri_a_.push_back(mesh.vertices[tri[0]]);
      tri_b_.push_back(mesh.vertices[tri[1]]);
      tri_c_.push_back(mesh.vertices[tri[2]]);
      tri_label_.push_back(lm.triangle_labels[t]);
      tri_is_far_.push_back(is_far ? 1 : 0);
    }
  };
  append(scene.near_mesh, false);
  append(scene.far_mesh, true);

  if (!tri_a_.empty()) {
    bvh_order_.resize(tri_a_.size());
    std::iota(bvh_order_.begin(), bvh_order_.end(), 0u);
    bvh_nodes_.reserve(2 * tri_a_.size() / kLeafSize + 2);
    bvh_root_ = build(0, static_cast<uint32_t>(bvh_order_.size()));
  }
}

int32_t RayCaster::build(uint32_t begin, uint32_t end) {
  BvhNode node;
  node.begin = begin;
  node.end = end;
  constexpr double inf = std::numeric_limits<double>::infinity();
  node.lo = {inf, inf, inf};
  node.hi = {-inf, -inf, -inf};
  Vec3 cent_lo{inf, inf, inf}, cent_hi{-inf, -inf, -inf};
  for (uint32_t i = begin; i < end; ++i) {
    uint32_t t = bvh_order_[i];
    for (const Vec3* v : {&tri_a_[t], &tri_b_[t], &tri_c_[t]}) {
      node.lo = {std::min(node.lo.x, v->x), std::min(node.lo.y, v->y), std::min(node.lo.z, v->z)};
      node.hi = {std::max(node.hi.x, v->x), std::max(node.hi.y, v->y), std::max(node.hi.z, v->z)};
    }
    Vec3 c = (tri_a_[t] + tri_b_[t] + tri_c_[t]) / 3.0;
    cent_lo = {std::min(cent_lo.x, c.x), std::min(cent_lo.y, c.y), std::min(cent_lo.z, c.z)};
    cent_hi = {std::max(cent_hi.x, c.x), std::max(cent_hi.y, c.y), std::max(cent_hi.z, c.z)};
  }

  Vec3 extent = cent_hi - cent_lo;
  double max_extent = std::max({extent.x, extent.y, extent.z});
  if (end - begin <= kLeafSize || max_extent == 0.0) {
    bvh_nodes_.push_back(node);
    return static_cast<int32_t>(bvh_nodes_.size() - 1);
  }

  int axis = 0;
  if (extent.y > (axis == 0 ? extent.x : extent.y)) axis = 1;
  if (extent.z > (axis == 0 ? extent.x : axis == 1 ? extent.y : extent.z)) axis = 2;
  auto centroid_coord = [&](uint32_t t) {
    Vec3 c = (tri_a_[t] + tri_b_[t] + tri_c_[t]) / 3.0;
    return axis == 0 ? c.x : axis == 1 ? c.y : c.z;
  };

  uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(bvh_order_.begin() + begin, bvh_order_.begin() + mid, bvh_order_.begin() + end,
                   [&](uint32_t a, uint32_t b) {
                     double ca = centroid_coord(a), cb = centroid_coord(b);
                     if (ca != cb) return ca < cb;
                     return a < b;
                   });

  int32_t index = static_cast<int32_t>(bvh_nodes_.size());
  bvh_nodes_.push_back(node);
  int32_t left = build(begin, mid);
  int32_t right = build(mid, end);
  bvh_nodes_[index].left = left;
  bvh_nodes_[index].right = right;
  return index;
}

std::vector<uint8_t> RayCaster::visibility_mask(const CameraPose& cam) const {
  CameraBasis basis = camera_basis(cam);
  std::vector<uint8_t> visible(tri_a_.size(), 1);
  for (size_t t = 0; t < tri_a_.size(); ++t) {
    Vec3 centroid = (tri_a_[t] + tri_b_[t] + tri_c_[t]) / 3.0;
    double dist = length(centroid - cam.position);
    if (!tri_is_far_[t] && dist > cutoff_m_) {
      visible[t] = 0;
      continue;
    }
    if (tri_is_far_[t] && dist < cutoff_m_) {
      visible[t] = 0;
      continue;
    }
    double za = dot(tri_a_[t] - cam.position, basis.forward);
    double zb = dot(tri_b_[t] - cam.position, basis.forward);
    double zc = dot(tri_c_[t] - cam.position, basis.forward);
    if (std::min({za, zb, zc}) > cam.far_m) visible[t] = 0;
  }
  return visible;
}

std::optional<RayHit> RayCaster::trace(const Vec3& origin, const Vec3& dir, double near_t,
                                       const std::vector<uint8_t>& visible, bool use_bvh) const {
  double best_t = std::numeric_limits<double>::infinity();
  uint32_t best_tri = std::numeric_limits<uint32_t>::max();

  auto consider = [&](uint32_t t) {
    if (!visible[t]) return;
    TriHit hit = intersect(origin, dir, tri_a_[t], tri_b_[t], tri_c_[t]);
    if (!hit.ok || hit.t < near_t) return;
    if (hit.t < best_t || (hit.t == best_t && t < best_tri)) {
      best_t = hit.t;
      best_tri = t;
    }
  };

  if (!use_bvh || bvh_root_ < 0) {
    for (uint32_t t = 0; t < tri_a_.size(); ++t) consider(t);
  } else {
    int32_t stack[64];
    int top = 0;
    stack[top++] = bvh_root_;
    while (top > 0) {
      const BvhNode& node = bvh_nodes_[stack[--top]];
      double entry;
      if (!slab_hit(node.lo, node.hi, origin, dir, near_t, best_t, entry)) continue;
      if (node.left < 0) {
        for (uint32_t i = node.begin; i < node.end; ++i) consider(bvh_order_[i]);
      } else {
        stack[top++] = node.left;
        stack[top++] = node.right;
      }
    }
  }

  if (best_tri == std::numeric_limits<uint32_t>::max()) return std::nullopt;
  return RayHit{best_tri, best_t * length(dir), tri_label_[best_tri]};
}

ViewImage RayCaster::render(const CameraPose& cam, unsigned workers, bool use_bvh) const {
  cam.validate();
  stats::counters().raycasts.fetch_add(1);
  CameraBasis basis = camera_basis(cam);
  std::vector<uint8_t> visible = visibility_mask(cam);

  ViewImage img(cam.width, cam.height, label_to_color(SemanticLabel::Sky));
  parallel_for(static_cast<size_t>(cam.height), workers, [&](size_t j) {
    for (int i = 0; i < cam.width; ++i) {
      double x_ndc = (2.0 * i + 1.0 - cam.width) / cam.width;
      double y_ndc = (cam.height - (2.0 * j + 1.0)) / cam.height;
      Vec3 dir = basis.right * (x_ndc * basis.tan_half_h) +
                 basis.up * (y_ndc * basis.tan_half_v) + basis.forward;
      auto hit = trace(cam.position, dir, cam.near_m, visible, use_bvh);
      if (hit) img.at(i, static_cast<int>(j)) = label_to_color(hit->label);
    }
  });
  return img;
}

std::vector<std::optional<RayHit>> RayCaster::render_hits(const CameraPose& cam, unsigned workers,
                                                          bool use_bvh) const {
  cam.validate();
  CameraBasis basis = camera_basis(cam);
  std::vector<uint8_t> visible = visibility_mask(cam);

  std::vector<std::optional<RayHit>> hits(static_cast<size_t>(cam.width) * cam.height);
  parallel_for(static_cast<size_t>(cam.height), workers, [&](size_t j) {
    for (int i = 0; i < cam.width; ++i) {
      double x_ndc = (2.0 * i + 1.0 - cam.width) / cam.width;
      double y_ndc = (cam.height - (2.0 * j + 1.0)) / cam.height;
      Vec3 dir = basis.right * (x_ndc * basis.tan_half_h) +
                 basis.up * (y_ndc * basis.tan_half_v) + basis.forward;
      hits[j * cam.width + i] = trace(cam.position, dir, cam.near_m, visible, use_bvh);
    }
  });
  return hits;
}

ViewImage raycast_view(const ColoredScene& scene, const CameraPose& cam) {
  RayCaster caster(scene);
  return caster.render(cam);
}

}  // namespace wvi
