#pragma once

#include <string>

#include "wvi/raster.hpp"

namespace wvi {

// Reads an ESRI ASCII grid. Header must carry ncols, nrows, xllcorner,
// yllcorner, cellsize and NODATA_value (any order, case-insensitive),
// followed by exactly ncols*nrows values, first file row = northernmost.
// The returned raster is normalized so row 0 is the southernmost row.
GeoRaster load_raster(const std::string& path);

void save_raster(const GeoRaster& raster, const std::string& path);

}  // namespace wvi
