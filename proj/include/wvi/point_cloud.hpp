#pragma once

#include <cstddef>
#include <vector>

#include "wvi/core.hpp"
#include "wvi/vec3.hpp"

namespace wvi {

// Semantically labeled points; the label source for mesh label transfer.
// Never carries Sky.
struct LabeledPointCloud {
  std::vector<Vec3> positions;
  std::vector<SemanticLabel> labels;

  size_t size() const { return positions.size(); }
  bool empty() const { return positions.empty(); }

  void push_back(const Vec3& p, SemanticLabel l) {
    positions.push_back(p);
    labels.push_back(l);
  }
};

}  // namespace wvi
