#include "wvi/ply_io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "wvi/error.hpp"

namespace wvi {

namespace {

enum class PlyType { I8, U8, I16, U16, I32, U32, F32, F64 };

size_t type_size(PlyType t) {
  switch (t) {
    case PlyType::I8:
    case PlyType::U8:
      return 1;
    case PlyType::I16:
    case PlyType::U16:
      return 2;
    case PlyType::I32:
    case PlyType::U32:
    case PlyType::F32:
      return 4;
    case PlyType::F64:
      return 8;
  }
  return 0;
}

bool is_float_type(PlyType t) { return t == PlyType::F32 || t == PlyType::F64; }

PlyType parse_type(const std::string& s) {
  if (s == "char" || s == "int8") return PlyType::I8;
  if (s == "uchar" || s == "uint8") return PlyType::U8;
  if (s == "short" || s == "int16") return PlyType::I16;
  if (s == "ushort" || s == "uint16") return PlyType::U16;
  if (s == "int" || s == "int32") return PlyType::I32;
  if (s == "uint" || s == "uint32") return PlyType::U32;
  if (s == "float" || s == "float32") return PlyType::F32;
  if (s == "double" || s == "float64") return PlyType::F64;
  throw ParseError("ply: unknown property type '" + s + "'");
}

struct PlyProperty {
  std::string name;
  bool is_list = false;
  PlyType count_type = PlyType::U8;
  PlyType value_type = PlyType::F32;
};

struct PlyElement {
  std::string name;
  size_t count = 0;
  std::vector<PlyProperty> properties;

  int property_index(const std::string& n) const {
    for (size_t i = 0; i < properties.size(); ++i)
      if (properties[i].name == n) return static_cast<int>(i);
    return -1;
  }
};

// Cursor over the data region; handles both ASCII tokens and raw bytes.
class PlyCursor {
 public:
  PlyCursor(const std::string& data, size_t offset, bool binary)
      : data_(data), pos_(offset), binary_(binary) {}

  double read_scalar(PlyType t) {
    if (binary_) return read_binary(t);
    return read_ascii(t);
  }

  long long read_integer(PlyType t) {
    double v = read_scalar(t);
    return static_cast<long long>(v);
  }

  bool at_end() {
    if (binary_) return pos_ >= data_.size();
    skip_ws();
    return pos_ >= data_.size();
  }

 private:
  void skip_ws() {
    while (pos_ < data_.size() && std::isspace(static_cast<unsigned char>(data_[pos_]))) ++pos_;
  }

  double read_ascii(PlyType t) {
    skip_ws();
    if (pos_ >= data_.size()) throw ParseError("ply: unexpected end of data");
    size_t start = pos_;
    while (pos_ < data_.size() && !std::isspace(static_cast<unsigned char>(data_[pos_]))) ++pos_;
    std::string_view tok(data_.data() + start, pos_ - start);
    if (is_float_type(t)) {
      double v{};
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || p != tok.data() + tok.size())
        throw ParseError("ply: bad float token '" + std::string(tok) + "'");
      return v;
    }
    long long v{};
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size())
      throw ParseError("ply: bad integer token '" + std::string(tok) + "'");
    return static_cast<double>(v);
  }

  template <typename T>
  T read_raw() {
    if (pos_ + sizeof(T) > data_.size()) throw ParseError("ply: unexpected end of data");
    T v;
    std::memcpy(&v, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    if constexpr (sizeof(T) > 1) {
      if constexpr (std::endian::native == std::endian::big) {
        char* b = reinterpret_cast<char*>(&v);
        for (size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
      }
    }
    return v;
  }

  double read_binary(PlyType t) {
    switch (t) {
      case PlyType::I8:
        return read_raw<int8_t>();
      case PlyType::U8:
        return read_raw<uint8_t>();
      case PlyType::I16:
        return read_raw<int16_t>();
      case PlyType::U16:
        return read_raw<uint16_t>();
      case PlyType::I32:
        return read_raw<int32_t>();
      case PlyType::U32:
        return read_raw<uint32_t>();
      case PlyType::F32:
        return read_raw<float>();
      case PlyType::F64:
        return read_raw<double>();
    }
    return 0.0;
  }

  const std::string& data_;
  size_t pos_;
  bool binary_;
};

struct PlyFile {
  bool binary = false;
  std::vector<PlyElement> elements;
  size_t data_offset = 0;
};

PlyFile parse_header(const std::string& data, const std::string& path) {
  PlyFile file;
  size_t pos = 0;
  auto next_line = [&]() -> std::string {
    if (pos >= data.size()) throw ParseError(path + ": truncated ply header");
    size_t nl = data.find('\n', pos);
    if (nl == std::string::npos) throw ParseError(path + ": truncated ply header");
    std::string line = data.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    pos = nl + 1;
    return line;
  };

  if (next_line() != "ply") throw ParseError(path + ": missing ply magic");
  bool have_format = false;
  for (;;) {
    std::string line = next_line();
    std::istringstream ss(line);
    std::string kw;
    ss >> kw;
    if (kw == "comment" || kw == "obj_info" || kw.empty()) continue;
    if (kw == "format") {
      std::string fmt, ver;
      ss >> fmt >> ver;
      if (fmt == "ascii")
        file.binary = false;
      else if (fmt == "binary_little_endian")
        file.binary = true;
      else
        throw ParseError(path + ": unsupported ply format '" + fmt + "'");
      have_format = true;
    } else if (kw == "element") {
      PlyElement el;
      long long n = -1;
      ss >> el.name >> n;
      if (el.name.empty() || n < 0) throw ParseError(path + ": bad element line '" + line + "'");
      el.count = static_cast<size_t>(n);
      file.elements.push_back(el);
    } else if (kw == "property") {
      if (file.elements.empty()) throw ParseError(path + ": property before element");
      std::string t1;
      ss >> t1;
      PlyProperty prop;
      if (t1 == "list") {
        std::string ct, vt;
        ss >> ct >> vt >> prop.name;
        prop.is_list = true;
        prop.count_type = parse_type(ct);
        prop.value_type = parse_type(vt);
        if (is_float_type(prop.count_type))
          throw ParseError(path + ": list count must be an integer type");
      } else {
        prop.value_type = parse_type(t1);
        ss >> prop.name;
      }
      if (prop.name.empty()) throw ParseError(path + ": property without name");
      file.elements.back().properties.push_back(prop);
    } else if (kw == "end_header") {
      break;
    } else {
      throw ParseError(path + ": unknown header keyword '" + kw + "'");
    }
  }
  if (!have_format) throw ParseError(path + ": missing format line");
  file.data_offset = pos;
  return file;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SemanticLabel label_from_file_code(long long code, const std::string& path) {
  auto l = label_from_code(code);
  if (!l) throw ValidationError(path + ": unknown label code " + std::to_string(code));
  if (*l == SemanticLabel::Sky)
    throw ValidationError(path + ": sky label on geometry (code 2 is background-only)");
  return *l;
}

struct VertexData {
  std::vector<Vec3> positions;
  std::vector<SemanticLabel> labels;
  bool has_labels = false;
};

struct FaceData {
  std::vector<std::array<uint32_t, 3>> indices;
  std::vector<SemanticLabel> labels;
  bool has_labels = false;
};

// Walks every element in file order, capturing vertex positions/labels and
// face indices, skipping everything else property-by-property.
void scan_elements(const PlyFile& file, const std::string& data, const std::string& path,
                   VertexData& verts, FaceData* faces) {
  PlyCursor cur(data, file.data_offset, file.binary);
  for (const auto& el : file.elements) {
    bool is_vertex = el.name == "vertex";
    bool is_face = faces != nullptr && el.name == "face";
    int xi = -1, yi = -1, zi = -1, li = -1, fi = -1, fli = -1;
    if (is_vertex) {
      xi = el.property_index("x");
      yi = el.property_index("y");
      zi = el.property_index("z");
      li = el.property_index("label");
      if (xi < 0 || yi < 0 || zi < 0)
        throw ParseError(path + ": vertex element lacks x/y/z properties");
      for (int idx : {xi, yi, zi}) {
        const auto& p = el.properties[idx];
        if (p.is_list || !is_float_type(p.value_type))
          throw ParseError(path + ": vertex position properties must be float or double");
      }
      if (li >= 0) {
        const auto& p = el.properties[li];
        if (p.is_list || is_float_type(p.value_type) || type_size(p.value_type) > 4)
          throw ParseError(path + ": label property must be an 8/16/32-bit integer");
        verts.has_labels = true;
      }
      verts.positions.reserve(el.count);
    }
    if (is_face) {
      fi = el.property_index("vertex_indices");
      if (fi < 0) fi = el.property_index("vertex_index");
      if (fi < 0 || !el.properties[fi].is_list)
        throw ParseError(path + ": face element lacks a vertex_indices list");
      fli = el.property_index("label");
      if (fli >= 0) {
        const auto& p = el.properties[fli];
        if (p.is_list || is_float_type(p.value_type) || type_size(p.value_type) > 4)
          throw ParseError(path + ": face label property must be an 8/16/32-bit integer");
        faces->has_labels = true;
      }
      faces->indices.reserve(el.count);
    }

    for (size_t i = 0; i < el.count; ++i) {
      Vec3 pos;
      long long label_code_val = 0;
      long long face_label_val = 0;
      std::array<uint32_t, 3> tri{};
      for (size_t p = 0; p < el.properties.size(); ++p) {
        const auto& prop = el.properties[p];
        if (prop.is_list) {
          long long n = cur.read_integer(prop.count_type);
          if (n < 0) throw ParseError(path + ": negative list count");
          bool capture = is_face && static_cast<int>(p) == fi;
          if (capture && n != 3)
            throw ParseError(path + ": face with " + std::to_string(n) +
                             " vertices; only triangles are supported");
          for (long long k = 0; k < n; ++k) {
            long long v = cur.read_integer(prop.value_type);
            if (capture) {
              if (v < 0) throw ValidationError(path + ": negative vertex index");
              tri[static_cast<size_t>(k)] = static_cast<uint32_t>(v);
            }
          }
        } else {
          double v = cur.read_scalar(prop.value_type);
          if (is_vertex) {
            if (static_cast<int>(p) == xi) pos.x = v;
            if (static_cast<int>(p) == yi) pos.y = v;
            if (static_cast<int>(p) == zi) pos.z = v;
            if (static_cast<int>(p) == li) label_code_val = static_cast<long long>(v);
          }
          if (is_face && static_cast<int>(p) == fli) face_label_val = static_cast<long long>(v);
        }
      }
      if (is_vertex) {
        if (!is_finite(pos)) throw ValidationError(path + ": non-finite vertex coordinate");
        verts.positions.push_back(pos);
        if (verts.has_labels) verts.labels.push_back(label_from_file_code(label_code_val, path));
      }
      if (is_face) {
        faces->indices.push_back(tri);
        if (faces->has_labels) faces->labels.push_back(label_from_file_code(face_label_val, path));
      }
    }
  }
}

const char* type_name(PlyType t) {
  switch (t) {
    case PlyType::I8:
      return "char";
    case PlyType::U8:
      return "uchar";
    case PlyType::I16:
      return "short";
    case PlyType::U16:
      return "ushort";
    case PlyType::I32:
      return "int";
    case PlyType::U32:
      return "uint";
    case PlyType::F32:
      return "float";
    case PlyType::F64:
      return "double";
  }
  return "?";
}

void write_double_ascii(std::ostream& os, double v) {
  char buf[32];
  int n = std::snprintf(buf, sizeof(buf), "%.17g", v);
  os.write(buf, n);
}

template <typename T>
void write_raw(std::ostream& os, T v) {
  if constexpr (sizeof(T) > 1) {
    if constexpr (std::endian::native == std::endian::big) {
      char* b = reinterpret_cast<char*>(&v);
      for (size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    }
  }
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

}  // namespace

MeshLoadResult load_mesh(const std::string& path) {
  std::string data = read_file(path);
  PlyFile file = parse_header(data, path);

  VertexData verts;
  FaceData faces;
  scan_elements(file, data, path, verts, &faces);

  MeshLoadResult result;
  result.mesh.vertices = std::move(verts.positions);
  const size_t nverts = result.mesh.vertices.size();

  std::vector<SemanticLabel> kept_labels;
  result.mesh.triangles.reserve(faces.indices.size());
  for (size_t f = 0; f < faces.indices.size(); ++f) {
    const auto& tri = faces.indices[f];
    for (uint32_t idx : tri) {
      if (idx >= nverts)
        throw ValidationError(path + ": face references vertex " + std::to_string(idx) + " of " +
                              std::to_string(nverts));
    }
    const Vec3& a = result.mesh.vertices[tri[0]];
    const Vec3& b = result.mesh.vertices[tri[1]];
    const Vec3& c = result.mesh.vertices[tri[2]];
    Vec3 n = cross(b - a, c - a);
    if (n.x == 0.0 && n.y == 0.0 && n.z == 0.0) {
      ++result.degenerate_dropped;
      continue;
    }
    result.mesh.triangles.push_back(tri);
    if (faces.has_labels) kept_labels.push_back(faces.labels[f]);
  }
  if (verts.has_labels) result.vertex_labels = std::move(verts.labels);
  if (faces.has_labels) result.triangle_labels = std::move(kept_labels);
  return result;
}

LabeledPointCloud load_point_cloud(const std::string& path) {
  std::string data = read_file(path);
  PlyFile file = parse_header(data, path);

  VertexData verts;
  scan_elements(file, data, path, verts, nullptr);
  if (!verts.has_labels) throw ParseError(path + ": point cloud lacks a label property");
  if (verts.positions.empty()) throw ValidationError(path + ": empty point cloud");

  LabeledPointCloud cloud;
  cloud.positions = std::move(verts.positions);
  cloud.labels = std::move(verts.labels);
  return cloud;
}

void save_mesh(const Mesh& mesh, const std::vector<SemanticLabel>* vertex_labels,
               const std::string& path, PlyFormat format,
               const std::vector<SemanticLabel>* triangle_labels) {
  if (vertex_labels && vertex_labels->size() != mesh.vertices.size())
    throw ValidationError(path + ": vertex label count does not match vertex count");
  if (triangle_labels && triangle_labels->size() != mesh.triangles.size())
    throw ValidationError(path + ": triangle label count does not match triangle count");

  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError(path + ": cannot open for writing");

  bool binary = format == PlyFormat::BinaryLittleEndian;
  os << "ply\nformat " << (binary ? "binary_little_endian" : "ascii") << " 1.0\n";
  os << "element vertex " << mesh.vertices.size() << "\n";
  os << "property " << type_name(PlyType::F64) << " x\n";
  os << "property " << type_name(PlyType::F64) << " y\n";
  os << "property " << type_name(PlyType::F64) << " z\n";
  if (vertex_labels) os << "property uchar label\n";
  os << "element face " << mesh.triangles.size() << "\n";
  os << "property list uchar uint vertex_indices\n";
  if (triangle_labels) os << "property uchar label\n";
  os << "end_header\n";

  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec3& v = mesh.vertices[i];
    if (binary) {
      write_raw(os, v.x);
      write_raw(os, v.y);
      write_raw(os, v.z);
      if (vertex_labels) write_raw<uint8_t>(os, static_cast<uint8_t>(label_code((*vertex_labels)[i])));
    } else {
      write_double_ascii(os, v.x);
      os << ' ';
      write_double_ascii(os, v.y);
      os << ' ';
      write_double_ascii(os, v.z);
      if (vertex_labels) os << ' ' << label_code((*vertex_labels)[i]);
      os << '\n';
    }
  }
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    if (binary) {
      write_raw<uint8_t>(os, 3);
      for (uint32_t idx : tri) write_raw<uint32_t>(os, idx);
      if (triangle_labels)
        write_raw<uint8_t>(os, static_cast<uint8_t>(label_code((*triangle_labels)[t])));
    } else {
      os << "3 " << tri[0] << ' ' << tri[1] << ' ' << tri[2];
      if (triangle_labels) os << ' ' << label_code((*triangle_labels)[t]);
      os << '\n';
    }
  }
  if (!os) throw IoError(path + ": write failed");
}

void save_point_cloud(const LabeledPointCloud& cloud, const std::string& path, PlyFormat format) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError(path + ": cannot open for writing");

  bool binary = format == PlyFormat::BinaryLittleEndian;
  os << "ply\nformat " << (binary ? "binary_little_endian" : "ascii") << " 1.0\n";
  os << "element vertex " << cloud.size() << "\n";
  os << "property double x\nproperty double y\nproperty double z\n";
  os << "property uchar label\n";
  os << "end_header\n";

  for (size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.positions[i];
    if (binary) {
      write_raw(os, p.x);
      write_raw(os, p.y);
      write_raw(os, p.z);
      write_raw<uint8_t>(os, static_cast<uint8_t>(label_code(cloud.labels[i])));
    } else {
      write_double_ascii(os, p.x);
      os << ' ';
      write_double_ascii(os, p.y);
      os << ' ';
      write_double_ascii(os, p.z);
      os << ' ' << label_code(cloud.labels[i]) << '\n';
    }
  }
  if (!os) throw IoError(path + ": write failed");
}

}  // namespace wvi
