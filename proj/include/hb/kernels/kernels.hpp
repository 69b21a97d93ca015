#pragma once

#include <cstddef>
#include <cstdint>

// Runtime-dispatched arithmetic kernels. Each operation has a scalar
// reference implementation and (on x86-64 with AVX2) a vector variant;
// dispatch is decided once at startup from CPUID. The scalar forms are the
// semantic ground truth and the SIMD forms are equivalence-tested against
// them bit-for-bit.
//
// Contracts shared by all kernels:
// - unaligned pointers are fine (vector paths use unaligned loads/stores)
// - dst may alias a or b for the element-wise ops
// - moduli are < 2^63 and all input residues are already reduced
namespace hb::kernels {

// dst[i] = (a[i] + b[i]) mod q
void mod_add_u64(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
                 std::size_t n, std::uint64_t q);

// dst[i] = (a[i] - b[i]) mod q
void mod_sub_u64(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
                 std::size_t n, std::uint64_t q);

// sum_i a[i] * b[i]
double dot_f64(const double* a, const double* b, std::size_t n);

// y[i] += alpha * x[i]
void axpy_f64(double* y, double alpha, const double* x, std::size_t n);

// sum_i popcount(a[i] ^ b[i])
std::size_t hamming_u64(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);

// sum_i (a[i] - b[i])^2 as int64 (inputs are small quantized values)
std::int64_t sqdiff_i32(const std::int32_t* a, const std::int32_t* b, std::size_t n);

// sum_i a[i] * b[i] as int64
std::int64_t dot_i32(const std::int32_t* a, const std::int32_t* b, std::size_t n);

// Name of the active backend: "avx2" or "scalar".
const char* active_backend();

// Force the scalar backend (tests use this to cross-check the dispatcher).
void force_scalar_backend(bool on);

namespace scalar {
void mod_add_u64(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
                 std::size_t n, std::uint64_t q);
void mod_sub_u64(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
                 std::size_t n, std::uint64_t q);
double dot_f64(const double* a, const double* b, std::size_t n);
void axpy_f64(double* y, double alpha, const double* x, std::size_t n);
std::size_t hamming_u64(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);
std::int64_t sqdiff_i32(const std::int32_t* a, const std::int32_t* b, std::size_t n);
std::int64_t dot_i32(const std::int32_t* a, const std::int32_t* b, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
bool supported();
void mod_add_u64(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
                 std::size_t n, std::uint64_t q);
void mod_sub_u64(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
                 std::size_t n, std::uint64_t q);
double dot_f64(const double* a, const double* b, std::size_t n);
void axpy_f64(double* y, double alpha, const double* x, std::size_t n);
std::size_t hamming_u64(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);
std::int64_t sqdiff_i32(const std::int32_t* a, const std::int32_t* b, std::size_t n);
std::int64_t dot_i32(const std::int32_t* a, const std::int32_t* b, std::size_t n);
}  // namespace avx2
#endif

}  // namespace hb::kernels
