#pragma once

#include "core/force_closure.hpp"
#include "core/geometry.hpp"
#include "core/kdtree.hpp"

#include <filesystem>

namespace sgrasp {

/// Parallel-jaw gripper with its closing region: the box swept between the
/// fingers, expressed in the grasp frame (x = approach, y = closing axis,
/// z = x cross y), centered on the contact midpoint.
struct GripperModel {
  double max_width = 0.07;
  double finger_depth = 0.04;
  double finger_thickness = 0.01;
  double region_depth = 0.04;   // extent along x (approach)
  double region_width = 0.07;   // extent along y (closing axis)
  double region_height = 0.02;  // extent along z

  bool is_valid() const {
    return max_width > 0 && finger_depth > 0 && finger_thickness > 0 &&
           region_depth > 0 && region_height > 0 && region_width > 0 &&
           region_width <= max_width;
  }
};

constexpr int kClosingRegionPoints = 1024;
constexpr int kMinRegionSupport = 16;

struct GraspCandidate {
  int grasp_id = -1;
  ContactPair contacts;
  RigidTransform frame;  // origin = contact midpoint, y parallel to p2-p1
  double mu_score = std::numeric_limits<double>::quiet_NaN();  // NaN = unscored
  GraspLabel label = GraspLabel::Discarded;
};

/// Antipodal candidate generation: seeded uniform draws of p1, first
/// neighbor within max_width passing the loose mu=3.0 antipodal pre-filter
/// becomes p2, then 8 approach directions about the closing axis, keeping
/// those whose dilated closing region clears the table. Stops at n_target
/// candidates or after the attempt budget.
std::vector<GraspCandidate> sample_candidates(const PointCloud& cloud,
                                              const KdTree& tree,
                                              const GripperModel& gripper,
                                              int n_target, double table_z,
                                              uint64_t seed);

struct ClosingRegion {
  bool sufficient = false;        // >= kMinRegionSupport points in the box
  std::vector<Vec3> points;       // exactly 1024, grasp frame / max_width
};

/// Crops the cloud to the candidate's closing-region box (grasp frame),
/// resamples to exactly 1024 points (down: without replacement; up: keep all
/// plus uniform duplicates), then normalizes coordinates by max_width.
ClosingRegion extract_closing_region(const PointCloud& cloud,
                                     const KdTree& tree,
                                     const GraspCandidate& candidate,
                                     const GripperModel& gripper,
                                     uint64_t seed);

/// Re-snaps each candidate's contacts to the nearest complete-cloud points
/// (with their normals), then sweeps and labels. Candidates whose contacts
/// moved more than max_snap are dropped; order is otherwise preserved.
std::vector<GraspCandidate> score_and_label(
    const std::vector<GraspCandidate>& candidates, const PointCloud& complete,
    const KdTree& complete_tree, const std::vector<double>& list_mu,
    double th_good = 0.45, double th_bad = 0.75, double max_snap = 0.005);

/// Grasp record CSV: scene_id,grasp_id,p1*,p2*,n1*,n2*,g*,ra*,mu_score,label
/// with the frame stored as position + axis-angle and mu_score "inf" for
/// unstable, "nan" for unscored.
void write_grasp_csv(const std::filesystem::path& path,
                     const std::string& scene_id,
                     const std::vector<GraspCandidate>& candidates);
std::vector<GraspCandidate> read_grasp_csv(const std::filesystem::path& path,
                                           std::string* scene_id_out = nullptr);

/// Closing-region samples on disk: 1024 xyz triples, little-endian float32.
void write_crc(const std::filesystem::path& path, const ClosingRegion& region);
std::vector<Vec3> read_crc(const std::filesystem::path& path);

}  // namespace sgrasp
