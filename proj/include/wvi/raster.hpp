#pragma once

#include <cstddef>
#include <vector>

namespace wvi {

// Georeferenced grid (heights or index values). Origin is the lower-left
// corner of the extent; storage is row-major with row 0 = southernmost,
// regardless of file order. Cells are half-open squares
// [x0, x0 + cellsize) x [y0, y0 + cellsize); cell centers sit at
// origin + (index + 0.5) * cellsize.
struct GeoRaster {
  int ncols = 0;
  int nrows = 0;
  double origin_x = 0.0;
  double origin_y = 0.0;
  double cellsize = 1.0;
  double nodata = -9999.0;
  std::vector<double> values;  // ncols * nrows, southern row first

  double value(int col, int row) const { return values[static_cast<size_t>(row) * ncols + col]; }
  double& value(int col, int row) { return values[static_cast<size_t>(row) * ncols + col]; }
  bool is_nodata(int col, int row) const { return value(col, row) == nodata; }

  double cell_center_x(int col) const { return origin_x + (col + 0.5) * cellsize; }
  double cell_center_y(int row) const { return origin_y + (row + 0.5) * cellsize; }

  bool in_range(int col, int row) const {
    return col >= 0 && col < ncols && row >= 0 && row < nrows;
  }

  bool same_grid(const GeoRaster& o) const {
    return ncols == o.ncols && nrows == o.nrows && origin_x == o.origin_x &&
           origin_y == o.origin_y && cellsize == o.cellsize;
  }
};

}  // namespace wvi
