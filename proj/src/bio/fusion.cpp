#include "hb/bio/fusion.hpp"

#include "hb/codec/template_codec.hpp"

namespace hb::bio {

std::vector<double> fuse_face_iris(const std::vector<double>& face,
                                   const std::vector<double>& iris_reduced) {
  if (face.empty() || iris_reduced.empty()) throw UsageError("fusion parts must be nonempty");
  auto f = codec::unit_normalize(face);
  auto ir = codec::unit_normalize(iris_reduced);
  f.insert(f.end(), ir.begin(), ir.end());
  return codec::unit_normalize(f);
}

}  // namespace hb::bio
