#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "hb/kernels/kernels.hpp"

using namespace hb;

namespace {

std::mt19937_64 rng(12345);

std::vector<std::uint64_t> random_residues(std::size_t n, std::uint64_t q) {
  std::uniform_int_distribution<std::uint64_t> dist(0, q - 1);
  std::vector<std::uint64_t> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

}  // namespace

TEST_CASE("mod_add/mod_sub backends agree and match the definition") {
  for (std::uint64_t q : {17ULL, 786433ULL, 4611686018427322369ULL}) {
    for (std::size_t n : {1, 3, 4, 7, 64, 4096}) {
      auto a = random_residues(n, q);
      auto b = random_residues(n, q);
      std::vector<std::uint64_t> r_scalar(n), r_simd(n);
      kernels::scalar::mod_add_u64(r_scalar.data(), a.data(), b.data(), n, q);
      kernels::mod_add_u64(r_simd.data(), a.data(), b.data(), n, q);
      CHECK(r_scalar == r_simd);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(r_scalar[i] == (a[i] + b[i]) % q);

      kernels::scalar::mod_sub_u64(r_scalar.data(), a.data(), b.data(), n, q);
      kernels::mod_sub_u64(r_simd.data(), a.data(), b.data(), n, q);
      CHECK(r_scalar == r_simd);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(r_scalar[i] == (a[i] + q - b[i]) % q);
    }
  }
}

TEST_CASE("mod_add edge values near the modulus") {
  std::uint64_t q = (1ULL << 62) - 57;
  std::vector<std::uint64_t> a{q - 1, q - 1, 0, 1, q - 1, 0, q - 1, 5};
  std::vector<std::uint64_t> b{q - 1, 1, 0, q - 1, 0, q - 1, q - 2, 7};
  std::vector<std::uint64_t> rs(a.size()), rv(a.size());
  kernels::scalar::mod_add_u64(rs.data(), a.data(), b.data(), a.size(), q);
  kernels::mod_add_u64(rv.data(), a.data(), b.data(), a.size(), q);
  CHECK(rs == rv);
  kernels::scalar::mod_sub_u64(rs.data(), a.data(), b.data(), a.size(), q);
  kernels::mod_sub_u64(rv.data(), a.data(), b.data(), a.size(), q);
  CHECK(rs == rv);
}

TEST_CASE("dot_f64 and axpy_f64 are bit-identical across backends") {
  std::normal_distribution<double> dist(0.0, 1.0);
  for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 33, 1012, 4096}) {
    std::vector<double> a(n), b(n);
    for (auto& x : a) x = dist(rng);
    for (auto& x : b) x = dist(rng);
    double ds = kernels::scalar::dot_f64(a.data(), b.data(), n);
    double dv = kernels::dot_f64(a.data(), b.data(), n);
    CHECK(ds == dv);  // bitwise, not approximate

    std::vector<double> y1(n), y2(n);
    for (std::size_t i = 0; i < n; ++i) y1[i] = y2[i] = dist(rng);
    kernels::scalar::axpy_f64(y1.data(), 1.7, a.data(), n);
    kernels::axpy_f64(y2.data(), 1.7, a.data(), n);
    CHECK(y1 == y2);
  }
}

TEST_CASE("hamming_u64 matches popcount oracle") {
  for (std::size_t n : {1, 4, 5, 128, 1024}) {
    std::vector<std::uint64_t> a(n), b(n);
    for (auto& x : a) x = rng();
    for (auto& x : b) x = rng();
    std::size_t expect = 0;
    for (std::size_t i = 0; i < n; ++i) expect += static_cast<std::size_t>(__builtin_popcountll(a[i] ^ b[i]));
    CHECK(kernels::scalar::hamming_u64(a.data(), b.data(), n) == expect);
    CHECK(kernels::hamming_u64(a.data(), b.data(), n) == expect);
  }
}

TEST_CASE("integer score kernels agree across backends") {
  std::uniform_int_distribution<std::int32_t> dist(-221, 221);
  for (std::size_t n : {1, 7, 8, 9, 500, 1012}) {
    std::vector<std::int32_t> a(n), b(n);
    for (auto& x : a) x = dist(rng);
    for (auto& x : b) x = dist(rng);
    CHECK(kernels::scalar::sqdiff_i32(a.data(), b.data(), n) ==
          kernels::sqdiff_i32(a.data(), b.data(), n));
    CHECK(kernels::scalar::dot_i32(a.data(), b.data(), n) ==
          kernels::dot_i32(a.data(), b.data(), n));
  }
}

TEST_CASE("forced scalar backend changes dispatch only, not results") {
  auto a = random_residues(100, 786433);
  auto b = random_residues(100, 786433);
  std::vector<std::uint64_t> r1(100), r2(100);
  kernels::mod_add_u64(r1.data(), a.data(), b.data(), 100, 786433);
  kernels::force_scalar_backend(true);
  CHECK(std::string(kernels::active_backend()) == "scalar");
  kernels::mod_add_u64(r2.data(), a.data(), b.data(), 100, 786433);
  kernels::force_scalar_backend(false);
  CHECK(r1 == r2);
}
