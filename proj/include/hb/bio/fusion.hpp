#pragma once

#include <string>
#include <vector>

#include "hb/common.hpp"

namespace hb::bio {

// A match-ready real feature vector plus its provenance.
struct FusedTemplate {
  std::vector<double> vec;  // unit norm
  std::string modality;     // "face", "single-iris", "dual-iris", "full-fusion"
  int rotation = 0;         // gallery rotation index in [-7, +7], 0 for probes
  std::string subject_id;
  std::string session_id;
};

// Face-first fusion: unit-normalize each part independently, concatenate,
// then unit-normalize the whole (equal modality weighting). At paper scale
// the parts are 512 + 500 = 1012.
std::vector<double> fuse_face_iris(const std::vector<double>& face,
                                   const std::vector<double>& iris_reduced);

}  // namespace hb::bio
