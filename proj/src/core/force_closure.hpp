#pragma once

#include "core/geometry.hpp"

namespace sgrasp {

/// Two-finger contact: positions plus outward unit surface normals.
struct ContactPair {
  Vec3 p1 = Vec3::Zero();
  Vec3 p2 = Vec3::Zero();
  Vec3 n1 = Vec3::Zero();
  Vec3 n2 = Vec3::Zero();
};

/// Friction sweep score: the smallest coefficient in the sweep list that
/// still gives force closure. Infinity is the "unstable" sentinel (even the
/// largest coefficient fails); it serializes as "inf".
constexpr double kUnstableScore = std::numeric_limits<double>::infinity();

inline bool is_unstable(double score) { return std::isinf(score); }

enum class GraspLabel { Positive, Negative, Discarded };

int label_to_int(GraspLabel label);           // 1 / 0 / -1
GraspLabel label_from_int(int value);

/// Nguyen two-contact force closure for friction coefficient mu: the contact
/// line must lie strictly inside both friction cones. With v = unit(p2-p1),
/// alpha1 = angle(n1, -v), alpha2 = angle(n2, v), beta = atan(mu), closure
/// holds iff alpha1 < beta and alpha2 < beta. A contact with an invalid
/// (zero) normal never closes.
bool force_closure_test(const ContactPair& c, double mu);

/// Walks a strictly descending coefficient list from the top; returns the
/// last coefficient that still satisfies closure, or kUnstableScore when the
/// largest already fails. Closure is monotone in mu, so the walk stops at
/// the first failure.
double friction_sweep_score(const ContactPair& c,
                            const std::vector<double>& list_mu);

/// Score-to-label thresholding: positive when the score is a finite value
/// <= th_good, negative when >= th_bad (or unstable), otherwise discarded
/// (excluded from training).
GraspLabel grasp_label(double score, double th_good = 0.45,
                       double th_bad = 0.75);

/// The 15-entry descending friction coefficient sweep list.
const std::vector<double>& default_mu_list();

}  // namespace sgrasp
