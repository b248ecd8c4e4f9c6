#pragma once

#include "wvi/camera.hpp"
#include "wvi/image.hpp"
#include "wvi/label_transfer.hpp"

namespace wvi {

// The colored 3D scene: a near-field mesh (city model) rendered inside
// cutoff_m, a far-field terrain mesh rendered beyond it, and the white sky
// background. Immutable once built; shared read-only across workers.
struct ColoredScene {
  LabeledMesh near_mesh;
  LabeledMesh far_mesh;
  double cutoff_m = 2000.0;

  void validate() const;
  size_t triangle_count() const {
    return near_mesh.mesh.triangles.size() + far_mesh.mesh.triangles.size();
  }
};

ColoredScene make_scene(LabeledMesh near_mesh, LabeledMesh far_mesh = {}, double cutoff_m = 2000.0);

// Deterministic software rasterizer. Flat per-triangle palette colors over a
// sky background, pixel-center coverage with a top-left fill rule on a
// 1/256-pixel integer grid, strict less-than depth test with ties to the
// lower draw index. Near-mesh triangles with centroid beyond cutoff_m and
// far-mesh triangles with centroid inside it are culled. Every output pixel
// is one of the four palette colors.
ViewImage render_view(const ColoredScene& scene, const CameraPose& cam);

}  // namespace wvi
