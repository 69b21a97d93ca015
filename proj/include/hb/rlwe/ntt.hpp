#pragma once

#include <cstddef>
#include <vector>

#include "hb/rlwe/modarith.hpp"

namespace hb::rlwe {

// Negacyclic number-theoretic transform over Z_q[X]/(X^N + 1) for q ≡ 1
// (mod 2N), N a power of two. Forward output is in natural order: index k
// holds the evaluation of the polynomial at psi^(2k+1), where psi is the
// 2N-th primitive root chosen at construction. Pointwise products in the
// transformed domain therefore realize negacyclic convolution.
class NttTable {
 public:
  NttTable(u64 q, std::size_t n);

  u64 modulus() const { return q_; }
  std::size_t n() const { return n_; }
  u64 psi() const { return psi_; }

  void forward(u64* a) const;
  void inverse(u64* a) const;

  void forward(std::vector<u64>& a) const { forward(a.data()); }
  void inverse(std::vector<u64>& a) const { inverse(a.data()); }

 private:
  u64 q_;
  std::size_t n_;
  int log_n_;
  u64 psi_;

  std::vector<std::uint32_t> bitrev_;
  // twist[j] = psi^j, untwist[j] = psi^-j * n^-1 (inverse scaling folded in)
  std::vector<u64> twist_, twist_sh_;
  std::vector<u64> untwist_, untwist_sh_;
  // per-stage cyclic twiddles, flattened; stage s (len = 2^s) starts at
  // offset 2^(s-1) - 1 and holds len/2 entries
  std::vector<u64> fw_tw_, fw_tw_sh_;
  std::vector<u64> inv_tw_, inv_tw_sh_;

  void cyclic(u64* a, const std::vector<u64>& tw, const std::vector<u64>& tw_sh) const;
};

// Schoolbook negacyclic convolution, used as the independent oracle in tests
// and for sizes where no table has been built.
std::vector<u64> negacyclic_convolve_schoolbook(const std::vector<u64>& a,
                                                const std::vector<u64>& b, u64 q);

}  // namespace hb::rlwe
