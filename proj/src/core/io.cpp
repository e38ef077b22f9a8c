#include "core/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "binary file formats assume a little-endian host");

namespace sgrasp {

std::string fmt_g(double v, int precision) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

namespace {

std::ifstream open_in(const std::filesystem::path& path, bool binary) {
  std::ifstream f(path, binary ? std::ios::binary : std::ios::in);
  if (!f) throw std::runtime_error("cannot open for reading: " + path.string());
  return f;
}

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  return f;
}

}  // namespace

void write_ply(const std::filesystem::path& path, const PointCloud& cloud) {
  std::ofstream f = open_out(path, false);
  f << "ply\nformat ascii 1.0\n";
  f << "element vertex " << cloud.size() << "\n";
  f << "property float x\nproperty float y\nproperty float z\n";
  if (cloud.has_normals())
    f << "property float nx\nproperty float ny\nproperty float nz\n";
  f << "end_header\n";
  for (size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.points[i];
    f << fmt_g(p.x(), 9) << ' ' << fmt_g(p.y(), 9) << ' ' << fmt_g(p.z(), 9);
    if (cloud.has_normals()) {
      const Vec3& n = cloud.normals[i];
      f << ' ' << fmt_g(n.x(), 9) << ' ' << fmt_g(n.y(), 9) << ' '
        << fmt_g(n.z(), 9);
    }
    f << '\n';
  }
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

PointCloud read_ply(const std::filesystem::path& path) {
  std::ifstream f = open_in(path, false);
  std::string line;
  if (!std::getline(f, line) || line != "ply")
    throw std::runtime_error("not a PLY file: " + path.string());

  size_t n_vertex = 0;
  std::vector<std::string> props;
  bool in_vertex = false;
  while (std::getline(f, line)) {
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    if (tok == "end_header") break;
    if (tok == "comment") continue;
    if (tok == "format") {
      std::string fmt;
      ss >> fmt;
      if (fmt != "ascii")
        throw std::runtime_error("only ascii PLY supported: " + path.string());
    } else if (tok == "element") {
      std::string name;
      ss >> name;
      in_vertex = (name == "vertex");
      if (in_vertex) ss >> n_vertex;
    } else if (tok == "property" && in_vertex) {
      std::string type, name;
      ss >> type >> name;
      props.push_back(name);
    }
  }

  auto col = [&](const std::string& name) {
    for (size_t i = 0; i < props.size(); ++i)
      if (props[i] == name) return int(i);
    return -1;
  };
  const int cx = col("x"), cy = col("y"), cz = col("z");
  const int cnx = col("nx"), cny = col("ny"), cnz = col("nz");
  if (cx < 0 || cy < 0 || cz < 0)
    throw std::runtime_error("PLY missing x/y/z: " + path.string());
  const bool with_normals = cnx >= 0 && cny >= 0 && cnz >= 0;

  PointCloud cloud;
  cloud.points.reserve(n_vertex);
  if (with_normals) cloud.normals.reserve(n_vertex);
  std::vector<double> row(props.size());
  for (size_t i = 0; i < n_vertex; ++i) {
    for (double& v : row)
      if (!(f >> v)) throw std::runtime_error("truncated PLY: " + path.string());
    cloud.points.emplace_back(row[cx], row[cy], row[cz]);
    if (with_normals) cloud.normals.emplace_back(row[cnx], row[cny], row[cnz]);
  }
  return cloud;
}

void write_pgm16(const std::filesystem::path& path, const DepthImage& depth) {
  std::ofstream f = open_out(path, true);
  f << "P5\n" << depth.width << " " << depth.height << "\n65535\n";
  std::vector<uint8_t> buf(depth.data.size() * 2);
  for (size_t i = 0; i < depth.data.size(); ++i) {
    double mm = std::round(depth.data[i] * 1000.0);
    if (mm < 0) mm = 0;
    if (mm > 65535) mm = 65535;
    const auto v = uint16_t(mm);
    buf[2 * i] = uint8_t(v >> 8);  // big-endian per the netpbm convention
    buf[2 * i + 1] = uint8_t(v & 0xff);
  }
  f.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

DepthImage read_pgm16(const std::filesystem::path& path) {
  std::ifstream f = open_in(path, true);
  std::string magic;
  f >> magic;
  if (magic != "P5") throw std::runtime_error("not a P5 PGM: " + path.string());

  auto next_int = [&]() {
    // skip whitespace and '#' comment lines between header fields
    int c;
    while ((c = f.peek()) != EOF) {
      if (c == '#') {
        std::string comment;
        std::getline(f, comment);
      } else if (std::isspace(c)) {
        f.get();
      } else {
        break;
      }
    }
    long v = -1;
    f >> v;
    return v;
  };

  const long w = next_int(), h = next_int(), maxval = next_int();
  if (w <= 0 || h <= 0) throw std::runtime_error("bad PGM size: " + path.string());
  if (maxval != 65535)
    throw std::runtime_error("expected 16-bit PGM (maxval 65535): " + path.string());
  f.get();  // single whitespace after maxval

  DepthImage depth(int(w), int(h));
  std::vector<uint8_t> buf(size_t(w) * h * 2);
  f.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size()));
  if (f.gcount() != std::streamsize(buf.size()))
    throw std::runtime_error("truncated PGM: " + path.string());
  for (size_t i = 0; i < depth.data.size(); ++i) {
    const uint16_t v = uint16_t(buf[2 * i]) << 8 | buf[2 * i + 1];
    depth.data[i] = double(v) / 1000.0;
  }
  return depth;
}

DepthImage quantize_depth_mm(const DepthImage& depth) {
  DepthImage out(depth.width, depth.height);
  for (size_t i = 0; i < depth.data.size(); ++i) {
    double mm = std::round(depth.data[i] * 1000.0);
    if (mm < 0) mm = 0;
    if (mm > 65535) mm = 65535;
    out.data[i] = mm / 1000.0;
  }
  return out;
}

void write_poses(const std::filesystem::path& path,
                 const std::vector<RigidTransform>& poses) {
  std::ofstream f = open_out(path, false);
  for (const RigidTransform& t : poses) {
    const Mat4 m = t.matrix();
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        f << fmt_g(m(r, c)) << (r == 3 && c == 3 ? '\n' : ' ');
  }
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::vector<RigidTransform> read_poses(const std::filesystem::path& path) {
  std::ifstream f = open_in(path, false);
  std::vector<RigidTransform> poses;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    Mat4 m;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        if (!(ss >> m(r, c)))
          throw std::runtime_error("bad pose line in " + path.string());
    poses.push_back(RigidTransform::from_matrix(m));
    if (!poses.back().is_valid(1e-6))
      throw std::runtime_error("non-rigid pose in " + path.string());
  }
  return poses;
}

void write_intrinsics(const std::filesystem::path& path,
                      const CameraIntrinsics& K) {
  std::ofstream f = open_out(path, false);
  f << fmt_g(K.fx) << ' ' << fmt_g(K.fy) << ' ' << fmt_g(K.u0) << ' '
    << fmt_g(K.v0) << ' ' << K.width << ' ' << K.height << '\n';
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

CameraIntrinsics read_intrinsics(const std::filesystem::path& path) {
  std::ifstream f = open_in(path, false);
  CameraIntrinsics K;
  if (!(f >> K.fx >> K.fy >> K.u0 >> K.v0 >> K.width >> K.height))
    throw std::runtime_error("bad intrinsics file: " + path.string());
  if (!K.is_valid())
    throw std::runtime_error("invalid intrinsics in " + path.string());
  return K;
}

}  // namespace sgrasp
