#pragma once

#include "core/geometry.hpp"

#include <filesystem>
#include <span>

namespace sgrasp {

/// Truncated signed distance volume. tsdf is normalized to [-1, 1]
/// (1 = free space at or beyond the truncation band, negative = behind the
/// surface); unobserved voxels stay at tsdf 1, weight 0.
struct TsdfVolume {
  Vec3 origin = Vec3::Zero();  // min corner of the volume
  double voxel_size = 0.002;
  double trunc_dist = 0.008;
  double w_max = 64;
  int nx = 0, ny = 0, nz = 0;
  std::vector<float> tsdf;
  std::vector<float> weight;

  size_t voxel_count() const { return size_t(nx) * ny * nz; }
  size_t index(int i, int j, int k) const {
    return size_t(i) + size_t(nx) * (size_t(j) + size_t(ny) * size_t(k));
  }
  Vec3 voxel_center(int i, int j, int k) const {
    return origin + voxel_size * Vec3(i + 0.5, j + 0.5, k + 0.5);
  }
};

struct TsdfConfig {
  Vec3 min_corner{-0.2, -0.2, 0.0};
  Vec3 max_corner{0.2, 0.5, 0.3};
  double voxel_size = 0.002;
  double trunc_factor = 4.0;  // trunc_dist = trunc_factor * voxel_size
  double w_max = 64;
};

TsdfVolume make_volume(const TsdfConfig& config);

/// Curless-Levoy projective update: every voxel in front of the observed
/// surface (or within the truncation band behind it) blends
/// min(1, sdf/trunc_dist) into the running weighted average.
void integrate(TsdfVolume& vol, const DepthImage& depth,
               const CameraIntrinsics& K, const RigidTransform& T_wc);

/// Zero crossings of the tsdf along voxel edges (both endpoints observed),
/// linearly interpolated, deduplicated at voxel_size/4, with normals taken
/// from the tsdf gradient (pointing into free space).
PointCloud extract_surface(const TsdfVolume& vol);

/// Allocates a volume, integrates every frame, extracts the surface.
PointCloud fuse_views(std::span<const DepthImage> frames,
                      std::span<const RigidTransform> poses,
                      const CameraIntrinsics& K, const TsdfConfig& config);

/// Text header "TSDF1 dimx dimy dimz voxel_size ox oy oz" then raw
/// little-endian float32 (tsdf, weight) pairs, x-fastest voxel order.
void write_tsdf(const std::filesystem::path& path, const TsdfVolume& vol);
TsdfVolume read_tsdf(const std::filesystem::path& path);

}  // namespace sgrasp
