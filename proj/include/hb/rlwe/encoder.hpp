#pragma once

#include <cstdint>
#include <vector>

#include "hb/rlwe/poly.hpp"

namespace hb::rlwe {

// Plaintext: a polynomial mod t in coefficient form. The slot view is the
// negacyclic NTT mod t of this polynomial, read through the batching index
// map (see BatchEncoder).
struct Plaintext {
  std::vector<u64> coeffs;
  ParamsId params_id{};
};

// Batching (slot) codec. Slots are indexed 0..N-1 and laid out as two rows
// of N/2 columns: slot j = r*(N/2)+c maps to the evaluation of the plaintext
// polynomial at psi^e with e = ±3^c (mod 2N). Multiplication of plaintexts
// in the ring acts slot-wise; the automorphism X -> X^(3^k) rotates each row
// left by k and X -> X^(2N-1) swaps the rows.
class BatchEncoder {
 public:
  explicit BatchEncoder(ContextPtr ctx);

  // values are centered mod t; |values| <= N; missing slots are zero.
  Plaintext encode(const std::vector<std::int64_t>& values) const;
  std::vector<std::int64_t> decode(const Plaintext& pt) const;

  Plaintext zero() const;

  const FheContext& context() const { return *ctx_; }
  // logical slot -> NTT index
  const std::vector<std::uint32_t>& slot_index() const { return slot_index_; }

 private:
  ContextPtr ctx_;
  std::vector<std::uint32_t> slot_index_;
};

// Galois exponent helpers (exponents are odd residues mod 2N).
u64 galois_exp_row_rotate(std::size_t n, std::size_t steps);  // 3^steps mod 2N
u64 galois_exp_row_swap(std::size_t n);                       // 2N - 1

// Exponents consumed by sum_slots: row rotations by powers of two plus the
// row swap.
std::vector<u64> sum_slots_exponents(std::size_t n);

// Exponents needed to realize a cyclic shift of the full N-slot vector by k.
std::vector<u64> shift_exponents(std::size_t n, std::int64_t k);

}  // namespace hb::rlwe
