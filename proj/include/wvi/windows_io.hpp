#pragma once

#include <string>
#include <vector>

#include "wvi/vec3.hpp"

namespace wvi {

// One window = one camera pose: center position plus outward heading,
// degrees clockwise from north.
struct WindowSpec {
  std::string id;
  Vec3 position;
  double heading_deg = 0.0;
};

// Reads a window manifest CSV with header `id,x,y,z,heading_deg`.
// Order is preserved; duplicate ids and headings outside [0,360) are
// rejected.
std::vector<WindowSpec> load_windows(const std::string& path);

void save_windows(const std::vector<WindowSpec>& windows, const std::string& path);

}  // namespace wvi
