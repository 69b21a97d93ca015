#include "hb/kernels/kernels.hpp"

#include <atomic>

namespace hb::kernels {

namespace {

std::atomic<bool> g_force_scalar{false};

bool use_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  static const bool ok = avx2::supported();
  return ok && !g_force_scalar.load(std::memory_order_relaxed);
#else
  return false;
#endif
}

}  // namespace

void force_scalar_backend(bool on) { g_force_scalar.store(on, std::memory_order_relaxed); }

const char* active_backend() { return use_avx2() ? "avx2" : "scalar"; }

void mod_add_u64(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
                 std::size_t n, std::uint64_t q) {
#if defined(__x86_64__) || defined(_M_X64)
  if (use_avx2()) return avx2::mod_add_u64(dst, a, b, n, q);
#endif
  scalar::mod_add_u64(dst, a, b, n, q);
}

void mod_sub_u64(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
                 std::size_t n, std::uint64_t q) {
#if defined(__x86_64__) || defined(_M_X64)
  if (use_avx2()) return avx2::mod_sub_u64(dst, a, b, n, q);
#endif
  scalar::mod_sub_u64(dst, a, b, n, q);
}

double dot_f64(const double* a, const double* b, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
  if (use_avx2()) return avx2::dot_f64(a, b, n);
#endif
  return scalar::dot_f64(a, b, n);
}

void axpy_f64(double* y, double alpha, const double* x, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
  if (use_avx2()) return avx2::axpy_f64(y, alpha, x, n);
#endif
  scalar::axpy_f64(y, alpha, x, n);
}

std::size_t hamming_u64(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
  if (use_avx2()) return avx2::hamming_u64(a, b, n);
#endif
  return scalar::hamming_u64(a, b, n);
}

std::int64_t sqdiff_i32(const std::int32_t* a, const std::int32_t* b, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
  if (use_avx2()) return avx2::sqdiff_i32(a, b, n);
#endif
  return scalar::sqdiff_i32(a, b, n);
}

std::int64_t dot_i32(const std::int32_t* a, const std::int32_t* b, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
  if (use_avx2()) return avx2::dot_i32(a, b, n);
#endif
  return scalar::dot_i32(a, b, n);
}

}  // namespace hb::kernels
