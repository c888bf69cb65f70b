#include "sfrec/io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sfrec {

using nlohmann::json;

namespace {

std::string lowercase_extension(const std::string& path) {
  auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
  return ext;
}

// STL stores triangle soup; merge exactly coincident vertices so the
// watertightness check sees shared edges.
void weld_vertices(TriangleMesh& mesh) {
  struct Key {
    double x, y, z;
    bool operator<(const Key& o) const {
      if (x != o.x) return x < o.x;
      if (y != o.y) return y < o.y;
      return z < o.z;
    }
  };
  std::map<Key, int> seen;
  std::vector<Vec3> verts;
  std::vector<int> remap(mesh.vertices.size());
  for (int v = 0; v < int(mesh.vertices.size()); ++v) {
    Key k{mesh.vertices[v].x, mesh.vertices[v].y, mesh.vertices[v].z};
    auto it = seen.find(k);
    if (it == seen.end()) {
      remap[v] = int(verts.size());
      seen.emplace(k, remap[v]);
      verts.push_back(mesh.vertices[v]);
    } else {
      remap[v] = it->second;
    }
  }
  mesh.vertices = std::move(verts);
  for (auto& tri : mesh.triangles)
    for (auto& idx : tri) idx = remap[idx];
}

TriangleMesh load_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  TriangleMesh mesh;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      Vec3 v;
      ss >> v.x >> v.y >> v.z;
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ss >> tok) {
        // "v", "v/vt", "v//vn", "v/vt/vn"; negative indices count from the end.
        int v = std::stoi(tok.substr(0, tok.find('/')));
        if (v < 0) v = int(mesh.vertices.size()) + v + 1;
        idx.push_back(v - 1);
      }
      for (std::size_t t = 2; t < idx.size(); ++t)
        mesh.triangles.push_back({idx[0], idx[t - 1], idx[t]});
    }
  }
  finalize_mesh(mesh);
  return mesh;
}

float read_f32(std::ifstream& in) {
  char buf[4];
  in.read(buf, 4);
  float v;
  std::memcpy(&v, buf, 4);
  return v;
}

TriangleMesh load_stl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  char header[6] = {};
  in.read(header, 5);
  in.seekg(0);

  TriangleMesh mesh;
  auto add_triangle = [&mesh](const Vec3& a, const Vec3& b, const Vec3& c) {
    int base = int(mesh.vertices.size());
    mesh.vertices.push_back(a);
    mesh.vertices.push_back(b);
    mesh.vertices.push_back(c);
    mesh.triangles.push_back({base, base + 1, base + 2});
  };

  bool ascii = std::strncmp(header, "solid", 5) == 0;
  if (ascii) {
    // Could still be binary with a "solid" header; verify by parsing.
    std::string word;
    std::vector<Vec3> tri;
    bool parsed_any = false;
    while (in >> word) {
      if (word == "vertex") {
        Vec3 v;
        in >> v.x >> v.y >> v.z;
        tri.push_back(v);
        if (tri.size() == 3) {
          add_triangle(tri[0], tri[1], tri[2]);
          tri.clear();
          parsed_any = true;
        }
      }
    }
    if (!parsed_any) ascii = false;
    if (ascii) {
      weld_vertices(mesh);
      finalize_mesh(mesh);
      return mesh;
    }
    mesh = TriangleMesh{};
    in.clear();
    in.seekg(0);
  }

  in.seekg(80);
  char count_buf[4];
  in.read(count_buf, 4);
  uint32_t count;
  std::memcpy(&count, count_buf, 4);
  for (uint32_t t = 0; t < count && in; ++t) {
    Vec3 tri[4];
    for (auto& v : tri) {
      v.x = read_f32(in);
      v.y = read_f32(in);
      v.z = read_f32(in);
    }
    char attr[2];
    in.read(attr, 2);
    add_triangle(tri[1], tri[2], tri[3]);
  }
  weld_vertices(mesh);
  finalize_mesh(mesh);
  return mesh;
}

}  // namespace

TriangleMesh load_mesh(const std::string& path) {
  std::string ext = lowercase_extension(path);
  if (ext == "obj") return load_obj(path);
  if (ext == "stl") return load_stl(path);
  throw std::runtime_error("unsupported mesh format: " + path);
}

void save_obj(const TriangleMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  for (const auto& v : mesh.vertices) out << "v " << v.x << " " << v.y << " " << v.z << "\n";
  for (const auto& t : mesh.triangles)
    out << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
}

void save_stl(const TriangleMesh& mesh, const std::string& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (binary) {
    char header[80] = {};
    out.write(header, 80);
    uint32_t count = uint32_t(mesh.triangles.size());
    out.write(reinterpret_cast<const char*>(&count), 4);
    for (int t = 0; t < int(mesh.triangles.size()); ++t) {
      Vec3 n = mesh.triangle_normal(t);
      float vals[12] = {float(n.x), float(n.y), float(n.z)};
      for (int c = 0; c < 3; ++c) {
        const Vec3& v = mesh.vertices[mesh.triangles[t][c]];
        vals[3 + c * 3] = float(v.x);
        vals[4 + c * 3] = float(v.y);
        vals[5 + c * 3] = float(v.z);
      }
      out.write(reinterpret_cast<const char*>(vals), sizeof(vals));
      char attr[2] = {};
      out.write(attr, 2);
    }
  } else {
    out << "solid mesh\n";
    out.precision(9);
    for (int t = 0; t < int(mesh.triangles.size()); ++t) {
      Vec3 n = mesh.triangle_normal(t);
      out << "  facet normal " << n.x << " " << n.y << " " << n.z << "\n    outer loop\n";
      for (int c = 0; c < 3; ++c) {
        const Vec3& v = mesh.vertices[mesh.triangles[t][c]];
        out << "      vertex " << v.x << " " << v.y << " " << v.z << "\n";
      }
      out << "    endloop\n  endfacet\n";
    }
    out << "endsolid mesh\n";
  }
}

void save_grid(const SignedDistanceGrid& grid, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  json header;
  header["resolution"] = grid.layout.resolution;
  header["origin"] = {grid.layout.origin.x, grid.layout.origin.y, grid.layout.origin.z};
  header["spacing"] = grid.layout.spacing;
  header["sign"] = "negative-inside";
  header["dtype"] = "float64";
  std::string h = header.dump();
  out << h << "\n";
  out.write(reinterpret_cast<const char*>(grid.values.data()),
            std::streamsize(grid.values.size() * sizeof(double)));
}

SignedDistanceGrid load_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string header_line;
  std::getline(in, header_line);
  json header = json::parse(header_line);
  if (header.value("dtype", "") != "float64")
    throw std::runtime_error("grid file: unsupported dtype");
  if (header.value("sign", "") != "negative-inside")
    throw std::runtime_error("grid file: unsupported sign convention");
  GridLayout layout;
  layout.resolution = header.at("resolution").get<int>();
  auto o = header.at("origin");
  layout.origin = {o[0].get<double>(), o[1].get<double>(), o[2].get<double>()};
  layout.spacing = header.at("spacing").get<double>();
  if (layout.resolution <= 0 || layout.spacing <= 0)
    throw std::runtime_error("grid file: invalid header");
  SignedDistanceGrid grid = SignedDistanceGrid::filled(layout, 0.0);
  in.read(reinterpret_cast<char*>(grid.values.data()),
          std::streamsize(grid.values.size() * sizeof(double)));
  if (!in) throw std::runtime_error("grid file: truncated payload");
  return grid;
}

ConfigMap parse_config_text(const std::string& text) {
  ConfigMap config;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) config[key] = value;
  }
  return config;
}

ConfigMap load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void save_config(const ConfigMap& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& [key, value] : config) out << key << " = " << value << "\n";
}

}  // namespace sfrec
