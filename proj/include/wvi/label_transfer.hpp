#pragma once

#include <cstdint>
#include <vector>

#include "wvi/core.hpp"
#include "wvi/mesh.hpp"
#include "wvi/point_cloud.hpp"

namespace wvi {

// Mesh plus a semantic label per vertex and a derived flat label per
// triangle. Flat triangle labels keep every rasterized pixel on an exact
// palette color. Never carries Sky.
struct LabeledMesh {
  Mesh mesh;
  std::vector<SemanticLabel> vertex_labels;
  std::vector<SemanticLabel> triangle_labels;
};

// Per-triangle majority of the three vertex labels; a three-way tie breaks
// by priority Construction > Greenery > Waterbody.
std::vector<SemanticLabel> derive_triangle_labels(
    const std::vector<SemanticLabel>& vertex_labels,
    const std::vector<std::array<uint32_t, 3>>& triangles);

// Builds a LabeledMesh from per-vertex labels, deriving triangle labels and
// validating lengths and the no-Sky rule.
LabeledMesh make_labeled_mesh(Mesh mesh, std::vector<SemanticLabel> vertex_labels);

// Same, but with explicit triangle labels (DSM-layer meshes label triangles
// by cell, not by vertex majority).
LabeledMesh make_labeled_mesh(Mesh mesh, std::vector<SemanticLabel> vertex_labels,
                              std::vector<SemanticLabel> triangle_labels);

struct SurfaceSamples {
  std::vector<Vec3> positions;
  std::vector<uint32_t> triangle_index;  // source triangle per sample
};

// Area-uniform surface sampling: total count = round(area * density), each
// sample drawn from a triangle chosen by area weight. Deterministic for a
// fixed seed.
SurfaceSamples sample_surface(const Mesh& mesh, double density_per_m2, uint64_t seed);

// Sampling that inherits each sample's label from its source triangle.
LabeledPointCloud sample_labeled_surface(const LabeledMesh& labeled, double density_per_m2,
                                         uint64_t seed);

// Assigns each mesh vertex the label of its Euclidean-nearest cloud point
// (exact search, ties to the lowest point index), then derives triangle
// labels. brute_force switches the accelerator off for oracle comparisons.
LabeledMesh transfer_labels(const Mesh& mesh, const LabeledPointCloud& cloud,
                            unsigned workers = 1, bool brute_force = false);

}  // namespace wvi
