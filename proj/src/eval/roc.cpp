#include "hb/eval/roc.hpp"

#include <algorithm>
#include <cmath>

namespace hb::eval {

namespace {

std::vector<double> sorted_values(const std::vector<ScorePair>& pairs) {
  std::vector<double> v;
  v.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (!std::isfinite(p.similarity)) throw UsageError("non-finite similarity in score set");
    v.push_back(p.similarity);
  }
  std::sort(v.begin(), v.end());
  return v;
}

// candidate thresholds: every observed score plus a sentinel above all
std::vector<double> candidate_thresholds(const std::vector<double>& genuine,
                                         const std::vector<double>& impostor) {
  std::vector<double> c;
  c.reserve(genuine.size() + impostor.size() + 1);
  c.insert(c.end(), genuine.begin(), genuine.end());
  c.insert(c.end(), impostor.begin(), impostor.end());
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  c.push_back(std::nextafter(c.back(), 1e300));
  return c;
}

double frac_at_least(const std::vector<double>& sorted, double theta) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), theta);
  return static_cast<double>(sorted.end() - it) / static_cast<double>(sorted.size());
}

void require_nonempty(const ScoreSet& scores) {
  if (scores.genuine.empty() || scores.impostor.empty())
    throw UsageError("score set needs both genuine and impostor scores");
}

}  // namespace

double tar_at_far(const ScoreSet& scores, double far_target, double* threshold_out) {
  require_nonempty(scores);
  if (far_target < 0 || far_target > 1) throw UsageError("FAR target outside [0, 1]");
  auto genuine = sorted_values(scores.genuine);
  auto impostor = sorted_values(scores.impostor);
  for (double theta : candidate_thresholds(genuine, impostor)) {
    if (frac_at_least(impostor, theta) <= far_target) {
      if (threshold_out) *threshold_out = theta;
      return frac_at_least(genuine, theta);
    }
  }
  // unreachable: the sentinel always satisfies FAR = 0
  throw Error("no threshold satisfied the FAR budget");
}

double tar_at_far(const ScoreSet& scores, double far_target) {
  return tar_at_far(scores, far_target, nullptr);
}

double eer(const ScoreSet& scores, double* threshold_out) {
  require_nonempty(scores);
  auto genuine = sorted_values(scores.genuine);
  auto impostor = sorted_values(scores.impostor);
  double best_gap = 2.0, best_rate = 0.5, best_theta = 0.0;
  for (double theta : candidate_thresholds(genuine, impostor)) {
    double far = frac_at_least(impostor, theta);
    double frr = 1.0 - frac_at_least(genuine, theta);
    double gap = std::abs(far - frr);
    if (gap < best_gap) {
      best_gap = gap;
      best_rate = (far + frr) / 2.0;
      best_theta = theta;
    }
  }
  if (threshold_out) *threshold_out = best_theta;
  return best_rate;
}

double eer(const ScoreSet& scores) { return eer(scores, nullptr); }

RocReport make_roc_report(const ScoreSet& scores) {
  RocReport r;
  r.tar_at_1pct = tar_at_far(scores, 0.01);
  r.tar_at_0_1pct = tar_at_far(scores, 0.001);
  r.tar_at_0_01pct = tar_at_far(scores, 0.0001);
  r.eer_value = eer(scores);
  r.genuine_count = scores.genuine.size();
  r.impostor_count = scores.impostor.size();
  return r;
}

}  // namespace hb::eval
