#pragma once

#include "hb/rlwe/keys.hpp"

namespace hb::rlwe {

// RLWE ciphertext: 2 polys (degree 1) or 3 polys (degree 2, produced by
// multiplication). Polys are kept in the coefficient domain.
struct Ciphertext {
  std::vector<RnsPoly> polys;
  ParamsId params_id{};

  std::size_t degree() const { return polys.empty() ? 0 : polys.size() - 1; }
};

Ciphertext encrypt(const FheContext& ctx, const PublicKey& pk, const Plaintext& pt,
                   const Seed& seed);
Plaintext decrypt(const FheContext& ctx, const SecretKey& sk, const Ciphertext& ct);

Ciphertext hadd(const FheContext& ctx, const Ciphertext& a, const Ciphertext& b);
Ciphertext hsub(const FheContext& ctx, const Ciphertext& a, const Ciphertext& b);

// Exact BFV-style multiplication: centered CRT lift to the auxiliary NTT
// basis, integer tensor product, exact round(t*x/q) back into the ciphertext
// basis. Inputs must be degree 1; the result is degree 2.
Ciphertext hmul(const FheContext& ctx, const Ciphertext& a, const Ciphertext& b);

Ciphertext relinearize(const FheContext& ctx, const Ciphertext& ct, const RelinKey& rk);

// Slot-wise product with a plaintext (centered lift, no Delta scaling).
Ciphertext multiply_plain(const FheContext& ctx, const Ciphertext& ct, const Plaintext& pt);

// X -> X^g followed by a key switch back to s. Degree-1 input only.
Ciphertext apply_galois(const FheContext& ctx, const Ciphertext& ct, u64 exponent,
                        const GaloisKeySet& gks);

// Cyclic shift of the logical slot vector: decode(rotate(ct,k))[j] equals
// decode(ct)[(j+k) mod N]. Shifts that are not multiples of N/2 need the two
// masked automorphism branches, hence the encoder.
Ciphertext rotate_slots(const FheContext& ctx, const BatchEncoder& encoder, const Ciphertext& ct,
                        std::int64_t k, const GaloisKeySet& gks);

// Every slot of the result holds the sum of all N input slots.
Ciphertext sum_slots(const FheContext& ctx, const Ciphertext& ct, const GaloisKeySet& gks);

// floor(log2(q / (2t(||v||+1)))) where v is the recovered noise; 0 means
// decryption is no longer guaranteed.
int noise_budget(const FheContext& ctx, const SecretKey& sk, const Ciphertext& ct);

}  // namespace hb::rlwe
