#include "core/force_closure.hpp"

#include <cmath>

namespace sgrasp {

int label_to_int(GraspLabel label) {
  switch (label) {
    case GraspLabel::Positive: return 1;
    case GraspLabel::Negative: return 0;
    case GraspLabel::Discarded: return -1;
  }
  return -1;
}

GraspLabel label_from_int(int value) {
  if (value == 1) return GraspLabel::Positive;
  if (value == 0) return GraspLabel::Negative;
  if (value == -1) return GraspLabel::Discarded;
  throw std::invalid_argument("grasp label must be 1, 0 or -1");
}

bool force_closure_test(const ContactPair& c, double mu) {
  if (mu <= 0) throw std::invalid_argument("force_closure_test: mu <= 0");
  const Vec3 d = c.p2 - c.p1;
  const double len = d.norm();
  if (len <= 1e-6)
    throw std::invalid_argument("force_closure_test: coincident contact points");
  if (c.n1.squaredNorm() < 0.25 || c.n2.squaredNorm() < 0.25) return false;

  const Vec3 v = d / len;
  const double alpha1 = std::acos(std::clamp(c.n1.dot(-v), -1.0, 1.0));
  const double alpha2 = std::acos(std::clamp(c.n2.dot(v), -1.0, 1.0));
  const double beta = std::atan(mu);
  return alpha1 < beta && alpha2 < beta;
}

double friction_sweep_score(const ContactPair& c,
                            const std::vector<double>& list_mu) {
  if (list_mu.empty())
    throw std::invalid_argument("friction_sweep_score: empty coefficient list");
  for (size_t i = 1; i < list_mu.size(); ++i)
    if (list_mu[i] >= list_mu[i - 1] || list_mu[i] <= 0)
      throw std::invalid_argument(
          "friction_sweep_score: list must be strictly descending and positive");
  if (c.n1.squaredNorm() < 0.25 || c.n2.squaredNorm() < 0.25)
    return kUnstableScore;

  double score = kUnstableScore;
  for (const double mu : list_mu) {
    if (!force_closure_test(c, mu)) break;
    score = mu;
  }
  return score;
}

GraspLabel grasp_label(double score, double th_good, double th_bad) {
  if (!(th_good < th_bad))
    throw std::invalid_argument("grasp_label: requires th_good < th_bad");
  if (is_unstable(score)) return GraspLabel::Negative;
  if (score <= th_good) return GraspLabel::Positive;
  if (score >= th_bad) return GraspLabel::Negative;
  return GraspLabel::Discarded;
}

const std::vector<double>& default_mu_list() {
  static const std::vector<double> list = {3.0, 2.0, 1.7, 1.4, 1.3, 1.2, 1.1, 1.0,
                                           0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3};
  return list;
}

}  // namespace sgrasp
