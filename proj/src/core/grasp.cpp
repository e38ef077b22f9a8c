#include "core/grasp.hpp"

#include "core/io.hpp"
#include "core/rng.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace sgrasp {

namespace {

constexpr double kPreFilterMu = 3.0;
constexpr int kApproachCount = 8;

// first unit vector orthogonal to v, stable under the choice of reference
Vec3 orthogonal_unit(const Vec3& v) {
  const Vec3 ref = std::abs(v.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
  return v.cross(ref).normalized();
}

RigidTransform grasp_frame(const Vec3& midpoint, const Vec3& closing_axis,
                           const Vec3& approach) {
  RigidTransform frame;
  frame.rotation.col(0) = approach;
  frame.rotation.col(1) = closing_axis;
  frame.rotation.col(2) = approach.cross(closing_axis);
  frame.translation = midpoint;
  return frame;
}

// support of the dilated closing-region box in the -z world direction
double region_support_below(const RigidTransform& frame,
                            const GripperModel& gripper) {
  const Vec3 ext(gripper.region_depth / 2 + gripper.finger_thickness,
                 gripper.region_width / 2 + gripper.finger_thickness,
                 gripper.region_height / 2 + gripper.finger_thickness);
  double h = 0;
  for (int i = 0; i < 3; ++i)
    h += std::abs(frame.rotation(2, i)) * ext[i];
  return h;
}

}  // namespace

std::vector<GraspCandidate> sample_candidates(const PointCloud& cloud,
                                              const KdTree& tree,
                                              const GripperModel& gripper,
                                              int n_target, double table_z,
                                              uint64_t seed) {
  if (cloud.empty() || !cloud.has_normals())
    throw std::invalid_argument("sample_candidates: cloud must be non-empty with normals");
  if (n_target < 1) throw std::invalid_argument("sample_candidates: n_target < 1");
  if (!gripper.is_valid()) throw std::invalid_argument("sample_candidates: bad gripper");

  std::mt19937_64 rng(derive_seed(seed, {0x5eedu, 1}));
  std::uniform_int_distribution<size_t> pick(0, cloud.size() - 1);
  const long max_attempts = 1000 + 50L * n_target;

  std::vector<GraspCandidate> out;
  for (long attempt = 0; attempt < max_attempts && int(out.size()) < n_target;
       ++attempt) {
    const size_t i1 = pick(rng);
    if (!cloud.normal_valid(i1)) continue;
    const Vec3& p1 = cloud.points[i1];

    std::vector<int> neighbors = tree.radius_indices(p1, gripper.max_width);
    // seeded shuffle so the chosen partner is not biased toward low indices
    for (size_t i = neighbors.size(); i > 1; --i) {
      std::uniform_int_distribution<size_t> d(0, i - 1);
      std::swap(neighbors[i - 1], neighbors[d(rng)]);
    }

    int i2 = -1;
    ContactPair contacts;
    for (const int j : neighbors) {
      if (size_t(j) == i1 || !cloud.normal_valid(size_t(j))) continue;
      const Vec3& p2 = cloud.points[size_t(j)];
      if ((p2 - p1).norm() <= 1e-6) continue;
      const ContactPair c{p1, p2, cloud.normals[i1], cloud.normals[size_t(j)]};
      if (force_closure_test(c, kPreFilterMu)) {
        i2 = j;
        contacts = c;
        break;
      }
    }
    if (i2 < 0) continue;

    const Vec3 midpoint = 0.5 * (contacts.p1 + contacts.p2);
    const Vec3 closing = (contacts.p2 - contacts.p1).normalized();
    const Vec3 x0 = orthogonal_unit(closing);
    const Vec3 x90 = closing.cross(x0);
    for (int a = 0; a < kApproachCount && int(out.size()) < n_target; ++a) {
      const double ang = 2.0 * M_PI * double(a) / double(kApproachCount);
      const Vec3 approach = std::cos(ang) * x0 + std::sin(ang) * x90;
      const RigidTransform frame = grasp_frame(midpoint, closing, approach);
      if (midpoint.z() - region_support_below(frame, gripper) < table_z)
        continue;
      GraspCandidate cand;
      cand.grasp_id = int(out.size());
      cand.contacts = contacts;
      cand.frame = frame;
      out.push_back(cand);
    }
  }
  return out;
}

ClosingRegion extract_closing_region(const PointCloud& cloud,
                                     const KdTree& tree,
                                     const GraspCandidate& candidate,
                                     const GripperModel& gripper,
                                     uint64_t seed) {
  if (cloud.empty())
    throw std::invalid_argument("extract_closing_region: empty cloud");

  const Vec3 half(gripper.region_depth / 2, gripper.region_width / 2,
                  gripper.region_height / 2);
  const RigidTransform world_to_grasp = candidate.frame.inverse();
  const std::vector<int> nearby =
      tree.radius_indices(candidate.frame.translation, half.norm() + 1e-9);

  std::vector<Vec3> inside;
  for (const int idx : nearby) {
    const Vec3 q = world_to_grasp.apply(cloud.points[size_t(idx)]);
    if (std::abs(q.x()) <= half.x() && std::abs(q.y()) <= half.y() &&
        std::abs(q.z()) <= half.z())
      inside.push_back(q);
  }

  ClosingRegion region;
  if (int(inside.size()) < kMinRegionSupport) return region;
  region.sufficient = true;

  std::mt19937_64 rng(derive_seed(seed, {0xc10c, uint64_t(candidate.grasp_id)}));
  const size_t n = inside.size();
  region.points.reserve(kClosingRegionPoints);
  if (n >= kClosingRegionPoints) {
    // partial Fisher-Yates: first 1024 of a seeded permutation
    std::vector<size_t> ids(n);
    for (size_t i = 0; i < n; ++i) ids[i] = i;
    for (size_t i = 0; i < size_t(kClosingRegionPoints); ++i) {
      std::uniform_int_distribution<size_t> d(i, n - 1);
      std::swap(ids[i], ids[d(rng)]);
      region.points.push_back(inside[ids[i]]);
    }
  } else {
    region.points = inside;
    std::uniform_int_distribution<size_t> d(0, n - 1);
    while (region.points.size() < size_t(kClosingRegionPoints))
      region.points.push_back(inside[d(rng)]);
  }
  for (Vec3& p : region.points) p /= gripper.max_width;
  return region;
}

std::vector<GraspCandidate> score_and_label(
    const std::vector<GraspCandidate>& candidates, const PointCloud& complete,
    const KdTree& complete_tree, const std::vector<double>& list_mu,
    double th_good, double th_bad, double max_snap) {
  if (!complete.has_normals())
    throw std::invalid_argument("score_and_label: complete cloud needs normals");

  std::vector<GraspCandidate> out;
  out.reserve(candidates.size());
  for (const GraspCandidate& cand : candidates) {
    double d1_sq = 0, d2_sq = 0;
    const int i1 = complete_tree.nearest(cand.contacts.p1, &d1_sq);
    const int i2 = complete_tree.nearest(cand.contacts.p2, &d2_sq);
    if (i1 < 0 || i2 < 0) continue;
    if (d1_sq > max_snap * max_snap || d2_sq > max_snap * max_snap) continue;

    GraspCandidate scored = cand;
    scored.contacts.p1 = complete.points[size_t(i1)];
    scored.contacts.p2 = complete.points[size_t(i2)];
    scored.contacts.n1 = complete.normals[size_t(i1)];
    scored.contacts.n2 = complete.normals[size_t(i2)];
    if ((scored.contacts.p2 - scored.contacts.p1).norm() <= 1e-6) continue;

    scored.mu_score = friction_sweep_score(scored.contacts, list_mu);
    scored.label = grasp_label(scored.mu_score, th_good, th_bad);
    out.push_back(scored);
  }
  return out;
}

void write_grasp_csv(const std::filesystem::path& path,
                     const std::string& scene_id,
                     const std::vector<GraspCandidate>& candidates) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write grasp csv: " + path.string());
  f << "scene_id,grasp_id,p1x,p1y,p1z,p2x,p2y,p2z,n1x,n1y,n1z,n2x,n2y,n2z,"
       "gx,gy,gz,rax,ray,raz,mu_score,label\n";
  auto put3 = [&](const Vec3& v) {
    f << ',' << fmt_g(v.x()) << ',' << fmt_g(v.y()) << ',' << fmt_g(v.z());
  };
  for (const GraspCandidate& c : candidates) {
    f << scene_id << ',' << c.grasp_id;
    put3(c.contacts.p1);
    put3(c.contacts.p2);
    put3(c.contacts.n1);
    put3(c.contacts.n2);
    put3(c.frame.translation);
    put3(rotation_to_axis_angle(c.frame.rotation));
    f << ',';
    if (std::isnan(c.mu_score))
      f << "nan";
    else if (is_unstable(c.mu_score))
      f << "inf";
    else
      f << fmt_g(c.mu_score);
    f << ',' << label_to_int(c.label) << '\n';
  }
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::vector<GraspCandidate> read_grasp_csv(const std::filesystem::path& path,
                                           std::string* scene_id_out) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open grasp csv: " + path.string());
  std::string line;
  if (!std::getline(f, line))
    throw std::runtime_error("empty grasp csv: " + path.string());

  std::vector<GraspCandidate> out;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 22)
      throw std::runtime_error("bad grasp csv row in " + path.string());
    if (scene_id_out && out.empty()) *scene_id_out = cells[0];

    auto num = [&](size_t i) {
      if (cells[i] == "inf") return kUnstableScore;
      if (cells[i] == "nan") return std::numeric_limits<double>::quiet_NaN();
      return std::stod(cells[i]);
    };
    auto get3 = [&](size_t i) { return Vec3(num(i), num(i + 1), num(i + 2)); };

    GraspCandidate c;
    c.grasp_id = int(std::stol(cells[1]));
    c.contacts.p1 = get3(2);
    c.contacts.p2 = get3(5);
    c.contacts.n1 = get3(8);
    c.contacts.n2 = get3(11);
    c.frame.translation = get3(14);
    c.frame.rotation = axis_angle_to_rotation(get3(17));
    c.mu_score = num(20);
    c.label = label_from_int(int(std::stol(cells[21])));
    out.push_back(c);
  }
  return out;
}

void write_crc(const std::filesystem::path& path, const ClosingRegion& region) {
  if (!region.sufficient || int(region.points.size()) != kClosingRegionPoints)
    throw std::invalid_argument("write_crc: region is not a full 1024-point sample");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write crc: " + path.string());
  std::vector<float> buf;
  buf.reserve(size_t(kClosingRegionPoints) * 3);
  for (const Vec3& p : region.points) {
    buf.push_back(float(p.x()));
    buf.push_back(float(p.y()));
    buf.push_back(float(p.z()));
  }
  f.write(reinterpret_cast<const char*>(buf.data()),
          std::streamsize(buf.size() * sizeof(float)));
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::vector<Vec3> read_crc(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open crc: " + path.string());
  std::vector<float> buf(size_t(kClosingRegionPoints) * 3);
  f.read(reinterpret_cast<char*>(buf.data()),
         std::streamsize(buf.size() * sizeof(float)));
  if (f.gcount() != std::streamsize(buf.size() * sizeof(float)) ||
      f.peek() != EOF)
    throw std::runtime_error("crc file is not 1024 float32 triples: " + path.string());
  std::vector<Vec3> points;
  points.reserve(kClosingRegionPoints);
  for (size_t i = 0; i < buf.size(); i += 3)
    points.emplace_back(buf[i], buf[i + 1], buf[i + 2]);
  return points;
}

}  // namespace sgrasp
