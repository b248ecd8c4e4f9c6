#include "wvi/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "wvi/error.hpp"

namespace wvi {

namespace {

constexpr uint32_t kLeafSize = 16;

double dist_sq(const Vec3& a, const Vec3& b) {
  double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

double coord(const Vec3& p, int axis) { return axis == 0 ? p.x : axis == 1 ? p.y : p.z; }

}  // namespace

KdTree3::KdTree3(const std::vector<Vec3>& points) : points_(points) {
  if (points_.empty()) throw EmptyCloudError("kd-tree over an empty point set");
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  nodes_.reserve(2 * points_.size() / kLeafSize + 2);
  root_ = build(0, static_cast<uint32_t>(order_.size()));
}

int32_t KdTree3::build(uint32_t begin, uint32_t end) {
  Node node;
  node.begin = begin;
  node.end = end;
  if (end - begin <= kLeafSize) {
    nodes_.push_back(node);
    return static_cast<int32_t>(nodes_.size() - 1);
  }

  // Split the widest axis of the point bounds at the median.
  Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
  Vec3 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity()};
  for (uint32_t i = begin; i < end; ++i) {
    const Vec3& p = points_[order_[i]];
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  Vec3 extent = hi - lo;
  int axis = 0;
  if (extent.y > coord(extent, axis)) axis = 1;
  if (extent.z > coord(extent, axis)) axis = 2;
  if (coord(extent, axis) == 0.0) {
    // All points coincide; a leaf is the only sane shape.
    nodes_.push_back(node);
    return static_cast<int32_t>(nodes_.size() - 1);
  }

  uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](uint32_t a, uint32_t b) {
                     double ca = coord(points_[a], axis), cb = coord(points_[b], axis);
                     if (ca != cb) return ca < cb;
                     return a < b;
                   });
  node.axis = axis;
  node.split = coord(points_[order_[mid]], axis);

  int32_t index = static_cast<int32_t>(nodes_.size());
  nodes_.push_back(node);
  int32_t left = build(begin, mid);
  int32_t right = build(mid, end);
  nodes_[index].left = left;
  nodes_[index].right = right;
  return index;
}

void KdTree3::search(int32_t node_index, const Vec3& query, Best& best) const {
  const Node& node = nodes_[node_index];
  if (node.axis < 0) {
    for (uint32_t i = node.begin; i < node.end; ++i) {
      uint32_t idx = order_[i];
      double d = dist_sq(points_[idx], query);
      if (d < best.dist_sq || (d == best.dist_sq && idx < best.index)) {
        best.dist_sq = d;
        best.index = idx;
      }
    }
    return;
  }

  double delta = coord(query, node.axis) - node.split;
  int32_t near = delta < 0.0 ? node.left : node.right;
  int32_t far = delta < 0.0 ? node.right : node.left;
  search(near, query, best);
  // The far side may still hold an equidistant lower-index point, so only a
  // strictly larger plane distance prunes.
  if (delta * delta <= best.dist_sq) search(far, query, best);
}

uint32_t KdTree3::nearest(const Vec3& query) const {
  Best best{std::numeric_limits<double>::infinity(), std::numeric_limits<uint32_t>::max()};
  search(root_, query, best);
  return best.index;
}

uint32_t brute_force_nearest(const std::vector<Vec3>& points, const Vec3& query) {
  if (points.empty()) throw EmptyCloudError("nearest neighbor over an empty point set");
  uint32_t best_index = 0;
  double best_d = dist_sq(points[0], query);
  for (uint32_t i = 1; i < points.size(); ++i) {
    double d = dist_sq(points[i], query);
    if (d < best_d) {
      best_d = d;
      best_index = i;
    }
  }
  return best_index;
}

}  // namespace wvi
