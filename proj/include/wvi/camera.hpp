#pragma once

#include "wvi/vec3.hpp"
#include "wvi/windows_io.hpp"

namespace wvi {

// Level virtual camera at a window center. Heading is degrees clockwise
// from north; pitch and roll are identically zero. fov_deg is the vertical
// field of view; pixels are square, so the horizontal FOV follows from the
// aspect ratio (60 degrees both ways at the default square size).
struct CameraPose {
  Vec3 position;
  double heading_deg = 0.0;
  double fov_deg = 60.0;
  int width = 900;
  int height = 900;
  double near_m = 0.1;
  double far_m = 20000.0;

  void validate() const;
};

struct RenderParams {
  double fov_deg = 60.0;
  int width = 900;
  int height = 900;
  double near_m = 0.1;
  double far_m = 20000.0;
};

CameraPose place_camera(const WindowSpec& window, const RenderParams& params = {});

// Orthonormal camera frame in the x-east/y-north/z-up scene frame.
// forward = (sin h, cos h, 0), up = +z, right = east when facing north.
struct CameraBasis {
  Vec3 right;
  Vec3 up;
  Vec3 forward;
  double tan_half_h = 0.0;  // includes the aspect factor for square pixels
  double tan_half_v = 0.0;
};

CameraBasis camera_basis(const CameraPose& cam);

}  // namespace wvi
