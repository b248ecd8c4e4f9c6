#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wvi/vec3.hpp"

namespace wvi {

// Exact 3D nearest-neighbor search. Distance ties resolve to the lowest
// point index, so queries are deterministic and match the brute-force
// reference bit for bit.
class KdTree3 {
 public:
  explicit KdTree3(const std::vector<Vec3>& points);

  // Index of the nearest point; points must be non-empty.
  uint32_t nearest(const Vec3& query) const;

  size_t size() const { return points_.size(); }

 private:
  struct Node {
    // Leaf: [begin, end) into order_. Inner: split axis/value + children.
    uint32_t begin = 0;
    uint32_t end = 0;
    int axis = -1;  // -1 marks a leaf
    double split = 0.0;
    int32_t left = -1;
    int32_t right = -1;
  };

  struct Best {
    double dist_sq;
    uint32_t index;
  };

  int32_t build(uint32_t begin, uint32_t end);
  void search(int32_t node, const Vec3& query, Best& best) const;

  std::vector<Vec3> points_;
  std::vector<uint32_t> order_;
  std::vector<Node> nodes_;
  int32_t root_ = -1;
};

// Linear-scan reference with the same tie rule; the correctness oracle for
// KdTree3.
uint32_t brute_force_nearest(const std::vector<Vec3>& points, const Vec3& query);

}  // namespace wvi
