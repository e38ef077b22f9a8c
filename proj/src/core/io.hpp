#pragma once

#include "core/geometry.hpp"

#include <filesystem>
#include <string>

namespace sgrasp {

std::string fmt_g(double v, int precision = 17);

/// ASCII PLY, element "vertex" with float x y z and, when the cloud has
/// normals, float nx ny nz. Zero normals round-trip as zero (invalid).
void write_ply(const std::filesystem::path& path, const PointCloud& cloud);
PointCloud read_ply(const std::filesystem::path& path);

/// Binary PGM (P5), 16-bit big-endian, value = depth in millimeters,
/// 0 = invalid. Writing quantizes to whole millimeters.
void write_pgm16(const std::filesystem::path& path, const DepthImage& depth);
DepthImage read_pgm16(const std::filesystem::path& path);

/// The same millimeter quantization write_pgm16 applies, in memory. Fusing
/// quantized frames keeps `fuse` runs over saved files byte-compatible with
/// pipelines that fused before saving.
DepthImage quantize_depth_mm(const DepthImage& depth);

/// One transform per line, 16 space-separated floats, row-major 4x4.
void write_poses(const std::filesystem::path& path,
                 const std::vector<RigidTransform>& poses);
std::vector<RigidTransform> read_poses(const std::filesystem::path& path);

/// Single line "fx fy u0 v0 width height".
void write_intrinsics(const std::filesystem::path& path,
                      const CameraIntrinsics& K);
CameraIntrinsics read_intrinsics(const std::filesystem::path& path);

}  // namespace sgrasp
