#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wvi/camera.hpp"
#include "wvi/image.hpp"
#include "wvi/render.hpp"

namespace wvi {

// Nearest intersection along a pixel ray. distance is Euclidean meters from
// the camera; the label is never Sky (no-hit pixels stay background).
struct RayHit {
  uint32_t triangle = 0;  // index in the scene triangle stream (near then far)
  double distance = 0.0;
  SemanticLabel label = SemanticLabel::Construction;
};

// Independent reference renderer: one ray per pixel center, exact
// Moller-Trumbore tests, nearest hit wins with ties to the lower triangle
// index, culling rules identical to the rasterizer. Brute force by
// construction; the bounding-volume hierarchy is an optional accelerator
// that must not change any hit.
class RayCaster {
 public:
  explicit RayCaster(const ColoredScene& scene);

  ViewImage render(const CameraPose& cam, unsigned workers = 1, bool use_bvh = true) const;

  // Per-pixel hits in row-major order; nullopt where the ray escapes to sky.
  std::vector<std::optional<RayHit>> render_hits(const CameraPose& cam, unsigned workers = 1,
                                                 bool use_bvh = true) const;

  size_t triangle_count() const { return tri_a_.size(); }

 private:
  struct BvhNode {
    Vec3 lo, hi;
    int32_t left = -1;
    int32_t right = -1;
    uint32_t begin = 0;
    uint32_t end = 0;
  };

  int32_t build(uint32_t begin, uint32_t end);
  std::vector<uint8_t> visibility_mask(const CameraPose& cam) const;
  std::optional<RayHit> trace(const Vec3& origin, const Vec3& dir, double near_t,
                              const std::vector<uint8_t>& visible, bool use_bvh) const;

  // Flattened triangle stream: near mesh first, then far.
  std::vector<Vec3> tri_a_, tri_b_, tri_c_;
  std::vector<SemanticLabel> tri_label_;
  std::vector<uint8_t> tri_is_far_;
  double cutoff_m_ = 2000.0;

  std::vector<uint32_t> bvh_order_;
  std::vector<BvhNode> bvh_nodes_;
  int32_t bvh_root_ = -1;
};

// One-shot oracle render (builds the acceleration structure internally).
ViewImage raycast_view(const ColoredScene& scene, const CameraPose& cam);

}  // namespace wvi
