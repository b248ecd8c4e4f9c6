#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wvi/core.hpp"
#include "wvi/mesh.hpp"
#include "wvi/point_cloud.hpp"

namespace wvi {

enum class PlyFormat { Ascii, BinaryLittleEndian };

struct MeshLoadResult {
  Mesh mesh;
  // Present when the file carries an integer "label" vertex property.
  std::optional<std::vector<SemanticLabel>> vertex_labels;
  // Present when faces carry their own "label" property; lets meshes whose
  // triangle labels do not follow the vertex-majority rule (the DSM layer)
  // round-trip exactly.
  std::optional<std::vector<SemanticLabel>> triangle_labels;
  size_t degenerate_dropped = 0;
};

// Reads a PLY mesh (ASCII or binary little-endian). Vertex positions must be
// x/y/z float properties; an optional integer "label" property yields
// per-vertex labels. Zero-area triangles are dropped and counted.
MeshLoadResult load_mesh(const std::string& path);

// Reads a PLY point cloud: x/y/z plus a required integer "label" property.
LabeledPointCloud load_point_cloud(const std::string& path);

void save_mesh(const Mesh& mesh, const std::vector<SemanticLabel>* vertex_labels,
               const std::string& path, PlyFormat format = PlyFormat::BinaryLittleEndian,
               const std::vector<SemanticLabel>* triangle_labels = nullptr);

void save_point_cloud(const LabeledPointCloud& cloud, const std::string& path,
                      PlyFormat format = PlyFormat::BinaryLittleEndian);

}  // namespace wvi
