#include "wvi/distant.hpp"

#include <cmath>

#include "wvi/error.hpp"

namespace wvi {

void NdviThresholds::validate() const {
  if (!(greenery_min >= construction_min))
    throw ValidationError("NDVI thresholds: greenery_min must be >= construction_min");
}

LabelRaster segment_ndvi(const GeoRaster& ndvi, const NdviThresholds& thresholds) {
  thresholds.validate();
  LabelRaster out;
  out.grid = ndvi;
  out.labels.resize(ndvi.values.size());
  for (int row = 0; row < ndvi.nrows; ++row) {
    for (int col = 0; col < ndvi.ncols; ++col) {
      SemanticLabel l;
      if (ndvi.is_nodata(col, row)) {
        l = SemanticLabel::Waterbody;
      } else {
        double v = ndvi.value(col, row);
        if (v > thresholds.greenery_min)
          l = SemanticLabel::Greenery;
        else if (v >= thresholds.construction_min)
          l = SemanticLabel::Construction;
        else
          l = SemanticLabel::Waterbody;
      }
      out.labels[static_cast<size_t>(row) * ndvi.ncols + col] = l;
    }
  }
  return out;
}

LabelRaster register_labels(const LabelRaster& source, const GeoRaster& target) {
  LabelRaster out;
  out.grid = target;
  out.labels.resize(static_cast<size_t>(target.ncols) * target.nrows);
  const GeoRaster& src = source.grid;
  for (int row = 0; row < target.nrows; ++row) {
    double cy = target.cell_center_y(row);
    int src_row = static_cast<int>(std::floor((cy - src.origin_y) / src.cellsize));
    for (int col = 0; col < target.ncols; ++col) {
      double cx = target.cell_center_x(col);
      int src_col = static_cast<int>(std::floor((cx - src.origin_x) / src.cellsize));
      SemanticLabel l = SemanticLabel::Waterbody;
      if (src.in_range(src_col, src_row)) l = source.label(src_col, src_row);
      out.labels[static_cast<size_t>(row) * target.ncols + col] = l;
    }
  }
  return out;
}

LabeledMesh dsm_to_labeled_mesh(const GeoRaster& dsm, const LabelRaster& labels) {
  if (!dsm.same_grid(labels.grid))
    throw DimensionMismatchError("label raster is not registered on the DSM grid");

  LabeledMesh out;
  // Node (col,row) sits at the center of cell (col,row); -1 marks no-data.
  std::vector<int32_t> node_index(static_cast<size_t>(dsm.ncols) * dsm.nrows, -1);
  for (int row = 0; row < dsm.nrows; ++row) {
    for (int col = 0; col < dsm.ncols; ++col) {
      if (dsm.is_nodata(col, row)) continue;
      node_index[static_cast<size_t>(row) * dsm.ncols + col] =
          static_cast<int32_t>(out.mesh.vertices.size());
      out.mesh.vertices.push_back(
          {dsm.cell_center_x(col), dsm.cell_center_y(row), dsm.value(col, row)});
      out.vertex_labels.push_back(labels.label(col, row));
    }
  }

  auto node = [&](int col, int row) {
    return node_index[static_cast<size_t>(row) * dsm.ncols + col];
  };
  for (int row = 0; row + 1 < dsm.nrows; ++row) {
    for (int col = 0; col + 1 < dsm.ncols; ++col) {
      int32_t ll = node(col, row);
      int32_t lr = node(col + 1, row);
      int32_t ur = node(col + 1, row + 1);
      int32_t ul = node(col, row + 1);
      if (ll < 0 || lr < 0 || ur < 0 || ul < 0) continue;  // incomplete quad
      SemanticLabel l = labels.label(col, row);
      out.mesh.triangles.push_back({static_cast<uint32_t>(ll), static_cast<uint32_t>(lr),
                                    static_cast<uint32_t>(ur)});
      out.triangle_labels.push_back(l);
      out.mesh.triangles.push_back({static_cast<uint32_t>(ll), static_cast<uint32_t>(ur),
                                    static_cast<uint32_t>(ul)});
      out.triangle_labels.push_back(l);
    }
  }
  return out;
}

GeoRaster label_raster_to_grid(const LabelRaster& labels) {
  GeoRaster out = labels.grid;
  out.nodata = -9999.0;
  out.values.resize(labels.labels.size());
  for (size_t i = 0; i < labels.labels.size(); ++i)
    out.values[i] = static_cast<double>(label_code(labels.labels[i]));
  return out;
}

}  // namespace wvi
