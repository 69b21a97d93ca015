#include <cmath>

#include "hb/kernels/kernels.hpp"

// Scalar reference kernels. The f64 reductions use a fixed 4-accumulator
// association (matching the vector lane layout) so every backend produces
// bit-identical results, not just close ones.

namespace hb::kernels::scalar {

void mod_add_u64(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
                 std::size_t n, std::uint64_t q) {
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t s = a[i] + b[i];
    dst[i] = s >= q ? s - q : s;
  }
}

void mod_sub_u64(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
                 std::size_t n, std::uint64_t q) {
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t d = a[i] - b[i];
    dst[i] = a[i] < b[i] ? d + q : d;
  }
}

double dot_f64(const double* a, const double* b, std::size_t n) {
  double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = std::fma(a[i + 0], b[i + 0], acc0);
    acc1 = std::fma(a[i + 1], b[i + 1], acc1);
    acc2 = std::fma(a[i + 2], b[i + 2], acc2);
    acc3 = std::fma(a[i + 3], b[i + 3], acc3);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail = std::fma(a[i], b[i], tail);
  return ((acc0 + acc2) + (acc1 + acc3)) + tail;
}

void axpy_f64(double* y, double alpha, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

std::size_t hamming_u64(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += static_cast<std::size_t>(__builtin_popcountll(a[i] ^ b[i]));
  return total;
}

std::int64_t sqdiff_i32(const std::int32_t* a, const std::int32_t* b, std::size_t n) {
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t d = static_cast<std::int64_t>(a[i]) - b[i];
    acc += d * d;
  }
  return acc;
}

std::int64_t dot_i32(const std::int32_t* a, const std::int32_t* b, std::size_t n) {
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += static_cast<std::int64_t>(a[i]) * b[i];
  return acc;
}

}  // namespace hb::kernels::scalar
