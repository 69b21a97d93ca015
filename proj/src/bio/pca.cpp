#include "hb/bio/pca.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstring>

#include "hb/kernels/kernels.hpp"
#include "hb/log.hpp"

namespace hb::bio {

PcaModel pca_train(const std::vector<std::vector<double>>& samples, std::uint32_t k,
                   std::uint64_t seed, std::vector<std::string> sample_ids) {
  if (samples.size() < 2) throw InsufficientDataError("PCA needs at least 2 samples");
  if (k == 0) throw UsageError("PCA component count must be positive");
  std::size_t n = samples.size();
  std::size_t dim = samples[0].size();
  for (const auto& s : samples)
    if (s.size() != dim) throw UsageError("PCA samples differ in dimension");

  PcaModel model;
  model.input_dim = static_cast<std::uint32_t>(dim);
  model.seed = seed;
  model.sample_ids = std::move(sample_ids);

  model.mean.assign(dim, 0.0);
  for (const auto& s : samples)
    kernels::axpy_f64(model.mean.data(), 1.0, s.data(), dim);
  for (auto& m : model.mean) m /= static_cast<double>(n);

  // centered copies (n x dim); n is small by construction of the method
  std::vector<std::vector<double>> centered(n, std::vector<double>(dim));
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < dim; ++j) centered[i][j] = samples[i][j] - model.mean[j];
  });

  // Gram matrix of centered samples
  Eigen::MatrixXd gram(n, n);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i; j < n; ++j) {
      double g = kernels::dot_f64(centered[i].data(), centered[j].data(), dim);
      gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g;
      gram(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = g;
    }
  });

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success) throw Error("Gram eigendecomposition failed");
  const auto& evals = solver.eigenvalues();   // ascending
  const auto& evecs = solver.eigenvectors();

  std::uint32_t cap = static_cast<std::uint32_t>(n - 1);
  if (k > cap) {
    log::warn("PCA components capped at n-1 = " + std::to_string(cap) + " (requested " +
              std::to_string(k) + ")");
    k = cap;
  }
  double lambda_max = std::max(evals(static_cast<Eigen::Index>(n - 1)), 0.0);
  double floor = lambda_max * 1e-12;

  for (std::uint32_t c = 0; c < k; ++c) {
    auto idx = static_cast<Eigen::Index>(n - 1 - c);
    double lambda = evals(idx);
    if (lambda <= floor || lambda <= 0.0) {
      log::warn("PCA components capped at numerical rank " + std::to_string(c) + " (requested " +
                std::to_string(k) + ")");
      break;
    }
    // v = X^T u / sqrt(lambda)
    std::vector<double> v(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      kernels::axpy_f64(v.data(), evecs(static_cast<Eigen::Index>(i), idx), centered[i].data(), dim);
    double inv = 1.0 / std::sqrt(lambda);
    for (auto& x : v) x *= inv;
    // sign convention: largest-magnitude entry positive
    std::size_t arg = 0;
    for (std::size_t j = 1; j < dim; ++j)
      if (std::abs(v[j]) > std::abs(v[arg])) arg = j;
    if (v[arg] < 0)
      for (auto& x : v) x = -x;
    model.basis.push_back(std::move(v));
    model.explained_variance.push_back(lambda / static_cast<double>(n - 1));
  }
  model.k = static_cast<std::uint32_t>(model.basis.size());
  if (model.k == 0) throw InsufficientDataError("PCA found no components above numerical rank");

  model.mean_proj.resize(model.k);
  for (std::uint32_t c = 0; c < model.k; ++c)
    model.mean_proj[c] = kernels::dot_f64(model.basis[c].data(), model.mean.data(), dim);
  return model;
}

std::vector<std::vector<double>> pca_project_batch(const PcaModel& model,
                                                   const std::vector<std::vector<double>>& inputs) {
  for (const auto& v : inputs)
    if (v.size() != model.input_dim) throw UsageError("projection input has wrong dimension");
  std::size_t m = inputs.size();
  std::vector<std::vector<double>> out(m, std::vector<double>(model.k, 0.0));
  constexpr std::size_t kChunk = 8192;
  for (std::size_t start = 0; start < model.input_dim; start += kChunk) {
    std::size_t len = std::min<std::size_t>(kChunk, model.input_dim - start);
    for (std::uint32_t c = 0; c < model.k; ++c) {
      const double* row = model.basis[c].data() + start;
      for (std::size_t j = 0; j < m; ++j)
        out[j][c] += kernels::dot_f64(row, inputs[j].data() + start, len);
    }
  }
  for (std::size_t j = 0; j < m; ++j)
    for (std::uint32_t c = 0; c < model.k; ++c) out[j][c] -= model.mean_proj[c];
  return out;
}

std::vector<double> pca_project(const PcaModel& model, const std::vector<double>& v) {
  return pca_project_batch(model, {v})[0];
}

std::vector<double> pca_project(const PcaModel& model, const std::uint8_t* bits, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = bits[i];
  return pca_project(model, v);
}

std::vector<double> pca_reconstruct(const PcaModel& model, const std::vector<double>& coeffs) {
  if (coeffs.size() != model.k) throw UsageError("coefficient vector has wrong length");
  std::vector<double> out = model.mean;
  for (std::uint32_t c = 0; c < model.k; ++c)
    kernels::axpy_f64(out.data(), coeffs[c], model.basis[c].data(), out.size());
  return out;
}

std::vector<std::uint8_t> pcam_bytes(const PcaModel& model) {
  std::vector<std::uint8_t> out;
  put_bytes(out, "PCAM", 4);
  put_u8(out, 0x01);
  put_u32le(out, model.input_dim);
  put_u32le(out, model.k);
  for (double m : model.mean) put_f64le(out, m);
  for (const auto& row : model.basis)
    for (double x : row) put_f64le(out, x);
  put_u64le(out, model.seed);
  return out;
}

PcaModel parse_pcam(const std::vector<std::uint8_t>& bytes) {
  ByteReader r(bytes);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, "PCAM", 4) != 0) throw DecodeError("PCAM magic mismatch");
  if (r.u8() != 0x01) throw DecodeError("unsupported PCAM version");
  PcaModel model;
  model.input_dim = r.u32le();
  model.k = r.u32le();
  model.mean.resize(model.input_dim);
  for (auto& m : model.mean) m = r.f64le();
  model.basis.assign(model.k, std::vector<double>(model.input_dim));
  for (auto& row : model.basis)
    for (auto& x : row) x = r.f64le();
  model.seed = r.u64le();
  r.expect_done();
  model.mean_proj.resize(model.k);
  for (std::uint32_t c = 0; c < model.k; ++c)
    model.mean_proj[c] =
        kernels::dot_f64(model.basis[c].data(), model.mean.data(), model.input_dim);
  return model;
}

void write_pcam(const std::string& path, const PcaModel& model) {
  atomic_write_file(path, pcam_bytes(model));
}

PcaModel read_pcam(const std::string& path) { return parse_pcam(read_file(path)); }

}  // namespace hb::bio
