#include "wvi/camera.hpp"

#include <cmath>
#include <numbers>

#include "wvi/error.hpp"

namespace wvi {

void CameraPose::validate() const {
  if (!(fov_deg > 0.0 && fov_deg < 180.0))
    throw ValidationError("camera fov must be in (0, 180) degrees");
  if (!(near_m > 0.0)) throw ValidationError("camera near plane must be > 0");
  if (!(far_m > near_m)) throw ValidationError("camera far plane must exceed the near plane");
  if (width <= 0 || height <= 0) throw ValidationError("image size must be positive");
  if (!is_finite(position)) throw ValidationError("camera position must be finite");
}

CameraPose place_camera(const WindowSpec& window, const RenderParams& params) {
  CameraPose cam;
  cam.position = window.position;
  cam.heading_deg = window.heading_deg;
  cam.fov_deg = params.fov_deg;
  cam.width = params.width;
  cam.height = params.height;
  cam.near_m = params.near_m;
  cam.far_m = params.far_m;
  cam.validate();
  return cam;
}

CameraBasis camera_basis(const CameraPose& cam) {
  double h = cam.heading_deg * std::numbers::pi / 180.0;
  CameraBasis basis;
  basis.forward = {std::sin(h), std::cos(h), 0.0};
  basis.up = {0.0, 0.0, 1.0};
  basis.right = {std::cos(h), -std::sin(h), 0.0};
  basis.tan_half_v = std::tan(cam.fov_deg * 0.5 * std::numbers::pi / 180.0);
  basis.tan_half_h = basis.tan_half_v * static_cast<double>(cam.width) / cam.height;
  return basis;
}

}  // namespace wvi
