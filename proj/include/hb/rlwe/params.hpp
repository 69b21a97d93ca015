#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "hb/common.hpp"
#include "hb/rlwe/ntt.hpp"
#include "hb/rlwe/wideint.hpp"

namespace hb::rlwe {

using ParamsId = std::array<std::uint8_t, 16>;

// Parameter set for the leveled scheme: power-of-two cyclotomic ring of
// degree N, ciphertext modulus q = prod(q_i), plain modulus t, fresh-noise
// Gaussian width sigma with tail cutoff B, and key-switch digit width w.
// Every q_i and t must be ≡ 1 (mod 2N) so both the coefficient ring and the
// plaintext ring support the negacyclic NTT (ring multiplication and slot
// batching respectively).
struct FheParams {
  std::uint64_t ring_degree = 0;
  std::vector<std::uint64_t> ct_moduli;
  std::uint64_t plain_modulus = 0;
  double noise_stddev = 3.2;
  std::uint64_t noise_bound = 20;
  int relin_decomp_log2 = 16;

  // N=4096, two ~62-bit primes, t=786433. One ciphertext-ciphertext
  // multiplication with wide margin; >= 1012 usable slots; a degree-1
  // ciphertext carries 2*4096*16 = 131072 payload bytes.
  static FheParams production();
  // N=8 with small primes; brute-force oracles stay feasible.
  static FheParams toy();

  std::vector<std::uint8_t> canonical_bytes() const;
  ParamsId fingerprint() const;
};

// Immutable runtime companion of FheParams: NTT tables, CRT/Garner constants,
// the auxiliary multiplication basis, and the noise sampler table. Shared by
// reference everywhere; safe to use from any number of threads.
class FheContext {
 public:
  static std::shared_ptr<const FheContext> create(const FheParams& params);

  const FheParams& params() const { return params_; }
  const ParamsId& id() const { return id_; }

  std::size_t n() const { return n_; }
  int log_n() const { return log_n_; }
  std::size_t mod_count() const { return params_.ct_moduli.size(); }
  const std::vector<u64>& moduli() const { return params_.ct_moduli; }
  u64 t() const { return params_.plain_modulus; }

  const NttTable& ntt(std::size_t i) const { return ct_ntt_[i]; }
  const NttTable& ntt_t() const { return *t_ntt_; }

  // Auxiliary basis for exact tensor products: NTT-friendly primes whose
  // product exceeds 2*N*q^2.
  const std::vector<u64>& aux_moduli() const { return aux_moduli_; }
  const NttTable& aux_ntt(std::size_t j) const { return aux_ntt_[j]; }

  const U384& q_total() const { return q_total_; }
  const U384& q_half() const { return q_half_; }
  const U384& aux_total() const { return aux_total_; }
  const U384& aux_half() const { return aux_half_; }
  int q_bits() const { return q_bits_; }
  int kswitch_digits() const { return ks_digits_; }

  // Garner lift over the ciphertext basis; r has mod_count() entries.
  U384 lift_q(const u64* r) const;
  // Same over the auxiliary basis; r has aux_moduli().size() entries.
  U384 lift_aux(const u64* r) const;

  // Largest quantization scale the plain modulus supports without Euclidean
  // slot wraparound: max S with 4*(2(S+1))^2 < t.
  u64 max_scale() const { return max_scale_; }

  // Cumulative table for the centered discrete Gaussian (sigma, cutoff B);
  // value k is sampled when a uniform 64-bit draw falls below cdt()[k + B].
  const std::vector<u64>& gaussian_cdt() const { return cdt_; }

 private:
  explicit FheContext(const FheParams& params);

  static U384 garner(const u64* r, const std::vector<u64>& mods,
                     const std::vector<u64>& ipm);

  FheParams params_;
  ParamsId id_{};
  std::size_t n_ = 0;
  int log_n_ = 0;
  std::vector<NttTable> ct_ntt_;
  std::unique_ptr<NttTable> t_ntt_;
  std::vector<u64> aux_moduli_;
  std::vector<NttTable> aux_ntt_;
  U384 q_total_, q_half_, aux_total_, aux_half_;
  int q_bits_ = 0;
  int ks_digits_ = 0;
  u64 max_scale_ = 0;
  std::vector<u64> q_garner_ipm_, aux_garner_ipm_;
  std::vector<u64> cdt_;
};

using ContextPtr = std::shared_ptr<const FheContext>;

}  // namespace hb::rlwe
