#pragma once

#include <vector>

#include "wvi/core.hpp"
#include "wvi/label_transfer.hpp"
#include "wvi/raster.hpp"

namespace wvi {

// NDVI class boundaries. Values above greenery_min are greenery; values in
// [construction_min, greenery_min] are construction; everything else
// (below construction_min, or no-data) is waterbody.
struct NdviThresholds {
  double greenery_min = 0.1;
  double construction_min = 0.0;

  void validate() const;
};

// Grid of three-class labels on a GeoRaster geometry. Never contains Sky.
struct LabelRaster {
  GeoRaster grid;  // geometry only; grid.values carries the label codes
  std::vector<SemanticLabel> labels;

  SemanticLabel label(int col, int row) const {
    return labels[static_cast<size_t>(row) * grid.ncols + col];
  }
};

// Classifies each NDVI cell into greenery/construction/waterbody. Total:
// every cell, including no-data, receives exactly one label.
LabelRaster segment_ndvi(const GeoRaster& ndvi, const NdviThresholds& thresholds);

// Nearest-neighbor resample onto the target grid: each target cell takes
// the label of the source cell containing its center; centers outside the
// source extent become waterbody.
LabelRaster register_labels(const LabelRaster& source, const GeoRaster& target);

// Meshes a DSM into a labeled terrain layer: one vertex per valid-height
// grid node (at cell centers), two triangles per complete quad, quad label
// taken from its lower-left cell, split along the lower-left/upper-right
// diagonal.
LabeledMesh dsm_to_labeled_mesh(const GeoRaster& dsm, const LabelRaster& labels);

// Serializes a label raster as an ESRI ASCII grid of integer label codes.
GeoRaster label_raster_to_grid(const LabelRaster& labels);

}  // namespace wvi
