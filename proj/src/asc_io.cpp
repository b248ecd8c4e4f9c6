#include "wvi/asc_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "wvi/error.hpp"

namespace wvi {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

struct Tokenizer {
  const std::string& data;
  size_t pos = 0;

  bool next(std::string& out) {
    while (pos < data.size() && std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
    if (pos >= data.size()) return false;
    size_t start = pos;
    while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
    out.assign(data, start, pos - start);
    return true;
  }
};

double parse_double(const std::string& tok, const std::string& path) {
  double v{};
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size() || !std::isfinite(v))
    throw ParseError(path + ": bad numeric value '" + tok + "'");
  return v;
}

void write_double(std::ostream& os, double v) {
  char buf[32];
  int n = std::snprintf(buf, sizeof(buf), "%.17g", v);
  os.write(buf, n);
}

}  // namespace

GeoRaster load_raster(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string data = ss.str();

  Tokenizer tok{data};
  std::map<std::string, double> header;
  std::string key, value_tok;
  // Header: key/value pairs until the first token that is not a known key.
  std::string pending;
  for (;;) {
    if (!tok.next(key)) throw ParseError(path + ": missing grid values");
    std::string k = lower(key);
    if (k == "ncols" || k == "nrows" || k == "xllcorner" || k == "yllcorner" || k == "cellsize" ||
        k == "nodata_value") {
      if (header.count(k)) throw ParseError(path + ": duplicate header key '" + key + "'");
      if (!tok.next(value_tok)) throw ParseError(path + ": missing value for '" + key + "'");
      header[k] = parse_double(value_tok, path);
    } else {
      pending = key;  // first data token
      break;
    }
  }
  for (const char* k : {"ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value"}) {
    if (!header.count(k)) throw ParseError(path + ": missing header key '" + std::string(k) + "'");
  }

  GeoRaster raster;
  double ncols_d = header["ncols"];
  double nrows_d = header["nrows"];
  if (ncols_d <= 0 || nrows_d <= 0 || ncols_d != std::floor(ncols_d) || nrows_d != std::floor(nrows_d))
    throw ParseError(path + ": ncols/nrows must be positive integers");
  raster.ncols = static_cast<int>(ncols_d);
  raster.nrows = static_cast<int>(nrows_d);
  raster.origin_x = header["xllcorner"];
  raster.origin_y = header["yllcorner"];
  raster.cellsize = header["cellsize"];
  raster.nodata = header["nodata_value"];
  if (raster.cellsize <= 0) throw ParseError(path + ": cellsize must be > 0");

  const size_t expected = static_cast<size_t>(raster.ncols) * raster.nrows;
  std::vector<double> file_order;
  file_order.reserve(expected);
  file_order.push_back(parse_double(pending, path));
  std::string t;
  while (tok.next(t)) {
    if (file_order.size() >= expected)
      throw ParseError(path + ": more than " + std::to_string(expected) + " grid values");
    file_order.push_back(parse_double(t, path));
  }
  if (file_order.size() != expected)
    throw ParseError(path + ": expected " + std::to_string(expected) + " grid values, got " +
                     std::to_string(file_order.size()));

  // File rows run north to south; store south row first.
  raster.values.resize(expected);
  for (int file_row = 0; file_row < raster.nrows; ++file_row) {
    int row = raster.nrows - 1 - file_row;
    for (int col = 0; col < raster.ncols; ++col) {
      raster.value(col, row) = file_order[static_cast<size_t>(file_row) * raster.ncols + col];
    }
  }
  return raster;
}

void save_raster(const GeoRaster& raster, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError(path + ": cannot open for writing");

  os << "ncols " << raster.ncols << "\n";
  os << "nrows " << raster.nrows << "\n";
  os << "xllcorner ";
  write_double(os, raster.origin_x);
  os << "\nyllcorner ";
  write_double(os, raster.origin_y);
  os << "\ncellsize ";
  write_double(os, raster.cellsize);
  os << "\nNODATA_value ";
  write_double(os, raster.nodata);
  os << "\n";

  for (int file_row = 0; file_row < raster.nrows; ++file_row) {
    int row = raster.nrows - 1 - file_row;
    for (int col = 0; col < raster.ncols; ++col) {
      if (col) os << ' ';
      write_double(os, raster.value(col, row));
    }
    os << '\n';
  }
  if (!os) throw IoError(path + ": write failed");
}

}  // namespace wvi
