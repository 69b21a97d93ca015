#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hb/common.hpp"

namespace hb::eval {

struct ScorePair {
  std::string probe_id;
  std::string gallery_subject;
  double similarity = 0.0;
};

struct ScoreSet {
  std::vector<ScorePair> genuine;
  std::vector<ScorePair> impostor;
  std::string config_fingerprint;  // mode | modality | dims | seed
};

// Empirical TAR at a FAR budget, no interpolation. The threshold is the
// smallest similarity value theta (over the observed scores plus a sentinel
// above the maximum) with FAR(theta) = |{impostor >= theta}| / |impostor|
// <= far_target; acceptance is score >= theta.
double tar_at_far(const ScoreSet& scores, double far_target);
double tar_at_far(const ScoreSet& scores, double far_target, double* threshold_out);

// Rate at the discrete threshold minimizing |FAR - FRR|, reported as the
// midpoint of the two rates there.
double eer(const ScoreSet& scores);
double eer(const ScoreSet& scores, double* threshold_out);

struct RocReport {
  double tar_at_1pct = 0.0;
  double tar_at_0_1pct = 0.0;
  double tar_at_0_01pct = 0.0;
  double eer_value = 0.0;
  std::size_t genuine_count = 0;
  std::size_t impostor_count = 0;
};

RocReport make_roc_report(const ScoreSet& scores);

}  // namespace hb::eval
