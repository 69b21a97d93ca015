#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hb/common.hpp"

namespace hb::bio {

// PCA model trained with the snapshot (Gram-matrix) method: eigenvectors of
// the D x D sample covariance are recovered from the n x n Gram matrix of
// centered samples, so the D x D covariance is never materialized. Basis
// rows are orthonormal, ordered by descending explained variance, and
// sign-fixed so each row's largest-magnitude entry is positive.
struct PcaModel {
  std::uint32_t input_dim = 0;
  std::uint32_t k = 0;
  std::vector<double> mean;
  std::vector<std::vector<double>> basis;    // k rows of length input_dim
  std::vector<double> explained_variance;    // descending
  std::uint64_t seed = 0;                    // training-subset seed (manifest)
  std::vector<std::string> sample_ids;       // training manifest

  // cache: <basis_i, mean>, rebuilt on load
  std::vector<double> mean_proj;
};

// samples: n rows of length input_dim (n >= 2). Requested k above the
// achievable rank (n-1, further capped by numerical rank) is reduced with a
// logged warning.
PcaModel pca_train(const std::vector<std::vector<double>>& samples, std::uint32_t k,
                   std::uint64_t seed, std::vector<std::string> sample_ids = {});

// out_i = <basis_i, v - mean>
std::vector<double> pca_project(const PcaModel& model, const std::vector<double>& v);
std::vector<double> pca_project(const PcaModel& model, const std::uint8_t* bits, std::size_t n);

// Projects a batch in one pass over the basis (dimension-tiled, so the hot
// basis chunk is reused across the whole batch). Single-input projection
// routes through this, so both paths round identically.
std::vector<std::vector<double>> pca_project_batch(const PcaModel& model,
                                                   const std::vector<std::vector<double>>& inputs);

// Reconstruction v~ = mean + basis^T * coeffs (error analysis in tests).
std::vector<double> pca_reconstruct(const PcaModel& model, const std::vector<double>& coeffs);

// "PCAM" container: magic, version 0x01, u32 input_dim, u32 k, mean then
// basis rows as f64 LE, trailing u64 seed.
std::vector<std::uint8_t> pcam_bytes(const PcaModel& model);
PcaModel parse_pcam(const std::vector<std::uint8_t>& bytes);
void write_pcam(const std::string& path, const PcaModel& model);
PcaModel read_pcam(const std::string& path);

}  // namespace hb::bio
