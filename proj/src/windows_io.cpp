#include "wvi/windows_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_set>

#include "wvi/error.hpp"

namespace wvi {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  for (;;) {
    size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

double parse_double(const std::string& tok, const std::string& path, int line_no) {
  double v{};
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size())
    throw ParseError(path + ":" + std::to_string(line_no) + ": bad number '" + tok + "'");
  return v;
}

}  // namespace

std::vector<WindowSpec> load_windows(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");

  std::vector<WindowSpec> windows;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  int line_no = 0;
  bool header_done = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (!header_done) {
      if (fields != std::vector<std::string>{"id", "x", "y", "z", "heading_deg"})
        throw ParseError(path + ": header must be `id,x,y,z,heading_deg`");
      header_done = true;
      continue;
    }
    if (fields.size() != 5)
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected 5 fields, got " +
                       std::to_string(fields.size()));
    WindowSpec w;
    w.id = fields[0];
    if (w.id.empty()) throw ValidationError(path + ":" + std::to_string(line_no) + ": empty id");
    w.position = {parse_double(fields[1], path, line_no), parse_double(fields[2], path, line_no),
                  parse_double(fields[3], path, line_no)};
    if (!is_finite(w.position))
      throw ValidationError(path + ":" + std::to_string(line_no) + ": non-finite position");
    w.heading_deg = parse_double(fields[4], path, line_no);
    if (!(w.heading_deg >= 0.0 && w.heading_deg < 360.0))
      throw ValidationError(path + ":" + std::to_string(line_no) + ": heading " + fields[4] +
                            " outside [0,360)");
    if (!seen_ids.insert(w.id).second)
      throw ValidationError(path + ":" + std::to_string(line_no) + ": duplicate id '" + w.id + "'");
    windows.push_back(std::move(w));
  }
  if (!header_done) throw ParseError(path + ": missing header `id,x,y,z,heading_deg`");
  return windows;
}

void save_windows(const std::vector<WindowSpec>& windows, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError(path + ": cannot open for writing");
  os << "id,x,y,z,heading_deg\n";
  char buf[128];
  for (const auto& w : windows) {
    int n = std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,%.17g,%.17g\n", w.position.x,
                          w.position.y, w.position.z, w.heading_deg);
    os << w.id;
    os.write(buf, n);
  }
  if (!os) throw IoError(path + ": write failed");
}

}  // namespace wvi
