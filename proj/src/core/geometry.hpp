#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace sgrasp {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Rigid body transform, x_out = rotation * x + translation.
/// Serialized form is always a row-major 4x4 homogeneous matrix.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }
  static RigidTransform from_matrix(const Mat4& m);

  Mat4 matrix() const;
  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  RigidTransform inverse() const;

  // Orthonormal with det +1 within tol (entrywise on R^T R - I).
  bool is_valid(double tol = 1e-9) const;
};

/// a then b applied right-to-left: (a*b).apply(x) == a.apply(b.apply(x)).
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);

/// World-from-camera pose from the arm pose and the hand-eye transform.
RigidTransform compose_camera_pose(const RigidTransform& T_we,
                                   const RigidTransform& T_ec);

Mat3 rotation_about_z(double angle_rad);
Mat3 axis_angle_to_rotation(const Vec3& rotvec);
Vec3 rotation_to_axis_angle(const Mat3& rot);

struct CameraIntrinsics {
  double fx = 0, fy = 0;
  double u0 = 0, v0 = 0;
  int width = 0, height = 0;

  bool is_valid() const {
    return fx > 0 && fy > 0 && width > 0 && height > 0 && u0 >= 0 &&
           u0 < width && v0 >= 0 && v0 < height;
  }
};

/// Per-pixel depth in meters, row-major; 0 marks an invalid pixel.
struct DepthImage {
  int width = 0, height = 0;
  std::vector<double> data;

  DepthImage() = default;
  DepthImage(int w, int h) : width(w), height(h), data(size_t(w) * h, 0.0) {}

  double& at(int u, int v) { return data[size_t(v) * width + u]; }
  double at(int u, int v) const { return data[size_t(v) * width + u]; }
};

/// Points in meters with optional per-point unit normals.
/// A zero normal marks a point whose neighborhood was too degenerate to
/// orient; everything downstream treats it as "no normal".
struct PointCloud {
  std::vector<Vec3> points;
  std::vector<Vec3> normals;  // empty or same length as points

  size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool has_normals() const { return !normals.empty(); }
  bool normal_valid(size_t i) const {
    return has_normals() && normals[i].squaredNorm() > 0.25;
  }
};

/// Pinhole backprojection of all valid pixels, row-major pixel order,
/// output in the world frame.
PointCloud backproject(const DepthImage& depth, const CameraIntrinsics& K,
                       const RigidTransform& T_wc);

/// Forward pinhole model. Returns false when the point is behind the camera.
bool project(const CameraIntrinsics& K, const Vec3& p_cam, double& u,
             double& v);

PointCloud transform_cloud(const PointCloud& cloud, const RigidTransform& T);

}  // namespace sgrasp
