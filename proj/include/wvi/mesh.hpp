#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "wvi/vec3.hpp"

namespace wvi {

// Triangle mesh in the scene frame: x = east, y = north, z = up, meters.
struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<uint32_t, 3>> triangles;

  bool empty() const { return triangles.empty(); }

  Vec3 triangle_centroid(size_t t) const {
    const auto& tri = triangles[t];
    return (vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]]) / 3.0;
  }

  double triangle_area(size_t t) const {
    const auto& tri = triangles[t];
    Vec3 e1 = vertices[tri[1]] - vertices[tri[0]];
    Vec3 e2 = vertices[tri[2]] - vertices[tri[0]];
    return 0.5 * length(cross(e1, e2));
  }

  double total_area() const {
    double a = 0.0;
    for (size_t t = 0; t < triangles.size(); ++t) a += triangle_area(t);
    return a;
  }
};

}  // namespace wvi
