#include "core/tsdf.hpp"

#include "core/io.hpp"

#include <cmath>
#include <fstream>
#include <unordered_set>

namespace sgrasp {

TsdfVolume make_volume(const TsdfConfig& config) {
  if (config.voxel_size <= 0) throw std::invalid_argument("voxel_size <= 0");
  if (((config.max_corner - config.min_corner).array() <= 0).any())
    throw std::invalid_argument("empty volume bounds");
  TsdfVolume vol;
  vol.origin = config.min_corner;
  vol.voxel_size = config.voxel_size;
  vol.trunc_dist = config.trunc_factor * config.voxel_size;
  vol.w_max = config.w_max;
  const Vec3 extent = config.max_corner - config.min_corner;
  vol.nx = int(std::ceil(extent.x() / config.voxel_size));
  vol.ny = int(std::ceil(extent.y() / config.voxel_size));
  vol.nz = int(std::ceil(extent.z() / config.voxel_size));
  vol.tsdf.assign(vol.voxel_count(), 1.0f);
  vol.weight.assign(vol.voxel_count(), 0.0f);
  return vol;
}

void integrate(TsdfVolume& vol, const DepthImage& depth,
               const CameraIntrinsics& K, const RigidTransform& T_wc) {
  if (depth.width != K.width || depth.height != K.height)
    throw std::invalid_argument("integrate: depth size does not match intrinsics");

  const RigidTransform T_cw = T_wc.inverse();
  const Mat3& R = T_cw.rotation;
  const Vec3& t = T_cw.translation;
  // stepping along x in camera coordinates avoids a matrix product per voxel
  const Vec3 step_x = R.col(0) * vol.voxel_size;

  for (int k = 0; k < vol.nz; ++k) {
    for (int j = 0; j < vol.ny; ++j) {
      Vec3 p_cam = R * vol.voxel_center(0, j, k) + t;
      size_t idx = vol.index(0, j, k);
      for (int i = 0; i < vol.nx; ++i, ++idx, p_cam += step_x) {
        const double z = p_cam.z();
        if (z <= 0) continue;
        const int u = int(std::lround(K.fx * p_cam.x() / z + K.u0));
        const int v = int(std::lround(K.fy * p_cam.y() / z + K.v0));
        if (u < 0 || u >= K.width || v < 0 || v >= K.height) continue;
        const double d = depth.at(u, v);
        if (d <= 0) continue;
        const double sdf = d - z;
        if (sdf <= -vol.trunc_dist) continue;  // occluded beyond truncation
        const float tsdf_obs = float(std::min(1.0, sdf / vol.trunc_dist));
        const float w = vol.weight[idx];
        vol.tsdf[idx] = (w * vol.tsdf[idx] + tsdf_obs) / (w + 1.0f);
        vol.weight[idx] = std::min(w + 1.0f, float(vol.w_max));
      }
    }
  }
}

namespace {

Vec3 tsdf_gradient(const TsdfVolume& vol, int i, int j, int k) {
  auto sample = [&](int a, int b, int c) {
    a = std::clamp(a, 0, vol.nx - 1);
    b = std::clamp(b, 0, vol.ny - 1);
    c = std::clamp(c, 0, vol.nz - 1);
    return double(vol.tsdf[vol.index(a, b, c)]);
  };
  return Vec3(sample(i + 1, j, k) - sample(i - 1, j, k),
              sample(i, j + 1, k) - sample(i, j - 1, k),
              sample(i, j, k + 1) - sample(i, j, k - 1));
}

struct CellKey {
  int64_t x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  size_t operator()(const CellKey& c) const {
    size_t h = std::hash<int64_t>()(c.x);
    h = h * 0x9e3779b97f4a7c15ULL + std::hash<int64_t>()(c.y);
    h = h * 0x9e3779b97f4a7c15ULL + std::hash<int64_t>()(c.z);
    return h;
  }
};

}  // namespace

PointCloud extract_surface(const TsdfVolume& vol) {
  PointCloud cloud;
  std::unordered_set<CellKey, CellHash> seen;
  const double cell = vol.voxel_size / 4.0;

  auto emit = [&](const Vec3& p, const Vec3& grad) {
    const CellKey key{int64_t(std::floor(p.x() / cell)),
                      int64_t(std::floor(p.y() / cell)),
                      int64_t(std::floor(p.z() / cell))};
    if (!seen.insert(key).second) return;
    cloud.points.push_back(p);
    const double g = grad.norm();
    cloud.normals.push_back(g > 1e-12 ? Vec3(grad / g) : Vec3::Zero());
  };

  const int di[3] = {1, 0, 0}, dj[3] = {0, 1, 0}, dk[3] = {0, 0, 1};
  for (int k = 0; k < vol.nz; ++k) {
    for (int j = 0; j < vol.ny; ++j) {
      for (int i = 0; i < vol.nx; ++i) {
        const size_t idx0 = vol.index(i, j, k);
        const float w0 = vol.weight[idx0];
        if (w0 <= 0) continue;
        const float t0 = vol.tsdf[idx0];
        for (int e = 0; e < 3; ++e) {
          const int i1 = i + di[e], j1 = j + dj[e], k1 = k + dk[e];
          if (i1 >= vol.nx || j1 >= vol.ny || k1 >= vol.nz) continue;
          const size_t idx1 = vol.index(i1, j1, k1);
          if (vol.weight[idx1] <= 0) continue;
          const float t1 = vol.tsdf[idx1];
          if ((t0 < 0) == (t1 < 0)) continue;
          const double s = double(t0) / (double(t0) - double(t1));
          const Vec3 p0 = vol.voxel_center(i, j, k);
          const Vec3 p1 = vol.voxel_center(i1, j1, k1);
          emit(p0 + s * (p1 - p0), tsdf_gradient(vol, i, j, k));
        }
      }
    }
  }
  return cloud;
}

PointCloud fuse_views(std::span<const DepthImage> frames,
                      std::span<const RigidTransform> poses,
                      const CameraIntrinsics& K, const TsdfConfig& config) {
  if (frames.empty()) throw std::invalid_argument("fuse_views: no frames");
  if (frames.size() != poses.size())
    throw std::invalid_argument("fuse_views: frame/pose count mismatch");
  TsdfVolume vol = make_volume(config);
  for (size_t i = 0; i < frames.size(); ++i)
    integrate(vol, frames[i], K, poses[i]);
  return extract_surface(vol);
}

void write_tsdf(const std::filesystem::path& path, const TsdfVolume& vol) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write volume: " + path.string());
  f << "TSDF1 " << vol.nx << ' ' << vol.ny << ' ' << vol.nz << ' '
    << fmt_g(vol.voxel_size) << ' ' << fmt_g(vol.origin.x()) << ' '
    << fmt_g(vol.origin.y()) << ' ' << fmt_g(vol.origin.z()) << '\n';
  std::vector<float> interleaved(vol.voxel_count() * 2);
  for (size_t i = 0; i < vol.voxel_count(); ++i) {
    interleaved[2 * i] = vol.tsdf[i];
    interleaved[2 * i + 1] = vol.weight[i];
  }
  f.write(reinterpret_cast<const char*>(interleaved.data()),
          std::streamsize(interleaved.size() * sizeof(float)));
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

TsdfVolume read_tsdf(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open volume: " + path.string());
  std::string magic;
  TsdfVolume vol;
  f >> magic;
  if (magic != "TSDF1") throw std::runtime_error("not a TSDF1 file: " + path.string());
  if (!(f >> vol.nx >> vol.ny >> vol.nz >> vol.voxel_size >>
        vol.origin.x() >> vol.origin.y() >> vol.origin.z()))
    throw std::runtime_error("bad TSDF header: " + path.string());
  vol.trunc_dist = 4.0 * vol.voxel_size;
  f.get();  // newline
  std::vector<float> interleaved(vol.voxel_count() * 2);
  f.read(reinterpret_cast<char*>(interleaved.data()),
         std::streamsize(interleaved.size() * sizeof(float)));
  if (f.gcount() != std::streamsize(interleaved.size() * sizeof(float)))
    throw std::runtime_error("truncated TSDF file: " + path.string());
  vol.tsdf.resize(vol.voxel_count());
  vol.weight.resize(vol.voxel_count());
  for (size_t i = 0; i < vol.voxel_count(); ++i) {
    vol.tsdf[i] = interleaved[2 * i];
    vol.weight[i] = interleaved[2 * i + 1];
  }
  return vol;
}

}  // namespace sgrasp
