#include "core/geometry.hpp"

#include <cmath>

namespace sgrasp {

RigidTransform RigidTransform::from_matrix(const Mat4& m) {
  RigidTransform t;
  t.rotation = m.topLeftCorner<3, 3>();
  t.translation = m.topRightCorner<3, 1>();
  return t;
}

Mat4 RigidTransform::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = translation;
  return m;
}

RigidTransform RigidTransform::inverse() const {
  RigidTransform t;
  t.rotation = rotation.transpose();
  t.translation = -(rotation.transpose() * translation);
  return t;
}

bool RigidTransform::is_valid(double tol) const {
  const Mat3 err = rotation.transpose() * rotation - Mat3::Identity();
  if (err.cwiseAbs().maxCoeff() > tol) return false;
  if (rotation.determinant() < 0) return false;
  return translation.allFinite();
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  RigidTransform t;
  t.rotation = a.rotation * b.rotation;
  t.translation = a.rotation * b.translation + a.translation;
  return t;
}

RigidTransform compose_camera_pose(const RigidTransform& T_we,
                                   const RigidTransform& T_ec) {
  return compose(T_we, T_ec);
}

Mat3 rotation_about_z(double angle_rad) {
  return Eigen::AngleAxisd(angle_rad, Vec3::UnitZ()).toRotationMatrix();
}

Mat3 axis_angle_to_rotation(const Vec3& rotvec) {
  const double angle = rotvec.norm();
  if (angle < 1e-12) return Mat3::Identity();
  return Eigen::AngleAxisd(angle, rotvec / angle).toRotationMatrix();
}

Vec3 rotation_to_axis_angle(const Mat3& rot) {
  const Eigen::AngleAxisd aa(rot);
  return aa.axis() * aa.angle();
}

PointCloud backproject(const DepthImage& depth, const CameraIntrinsics& K,
                       const RigidTransform& T_wc) {
  if (depth.width != K.width || depth.height != K.height)
    throw std::invalid_argument("backproject: depth size does not match intrinsics");
  PointCloud out;
  out.points.reserve(depth.data.size());
  for (int v = 0; v < depth.height; ++v) {
    for (int u = 0; u < depth.width; ++u) {
      const double z = depth.at(u, v);
      if (z <= 0.0) continue;
      const Vec3 p_cam((u - K.u0) * z / K.fx, (v - K.v0) * z / K.fy, z);
      out.points.push_back(T_wc.apply(p_cam));
    }
  }
  return out;
}

bool project(const CameraIntrinsics& K, const Vec3& p_cam, double& u,
             double& v) {
  if (p_cam.z() <= 0.0) return false;
  u = K.fx * p_cam.x() / p_cam.z() + K.u0;
  v = K.fy * p_cam.y() / p_cam.z() + K.v0;
  return true;
}

PointCloud transform_cloud(const PointCloud& cloud, const RigidTransform& T) {
  PointCloud out;
  out.points.reserve(cloud.size());
  for (const Vec3& p : cloud.points) out.points.push_back(T.apply(p));
  if (cloud.has_normals()) {
    out.normals.reserve(cloud.size());
    for (const Vec3& n : cloud.normals) out.normals.push_back(T.rotation * n);
  }
  return out;
}

}  // namespace sgrasp
