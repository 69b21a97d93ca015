#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hb/common.hpp"

namespace hb::bio {

struct SynthConfig {
  std::uint32_t subjects = 10;
  std::uint32_t sessions = 2;
  double p_flip = 0.08;      // i.i.d. bit-flip rate on iris codes
  double face_sigma = 0.25;  // Gaussian noise on the latent face vector
  int max_shift = 7;         // per-session column shift drawn from [-max_shift, max_shift]
  std::uint32_t face_dim = 512;
  std::uint64_t seed = 1;
  // Quality dropout: with these probabilities a session's face (resp. iris)
  // capture is degraded to near-uselessness, mimicking blur/occlusion; at
  // most one modality degrades per session.
  double degrade_face_prob = 0.0;
  double degrade_iris_prob = 0.0;
  double degrade_face_sigma = 2.0;
  double degrade_iris_flip = 0.45;
  // When size == sessions, session i of every subject uses this exact shift
  // instead of a random one (planted-shift experiments).
  std::vector<int> forced_shifts;
};

struct SessionEntry {
  std::string id;
  int shift = 0;
  std::string quality = "good";  // good | face-degraded | iris-degraded
  std::string left_icod;
  std::string right_icod;
  std::string face_fvec;
};

struct SubjectEntry {
  std::string id;
  std::vector<SessionEntry> sessions;
};

struct DatasetManifest {
  std::string root;
  SynthConfig config;
  std::vector<SubjectEntry> subjects;

  std::string path(const std::string& rel) const { return root + "/" + rel; }
};

void save_manifest(const DatasetManifest& m);
DatasetManifest load_manifest(const std::string& dataset_dir);

}  // namespace hb::bio
