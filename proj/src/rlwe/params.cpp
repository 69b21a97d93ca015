#include "hb/rlwe/params.hpp"

#include <cmath>

#include "hb/log.hpp"

namespace hb::rlwe {

FheParams FheParams::production() {
  FheParams p;
  p.ring_degree = 4096;
  // Largest primes ≡ 1 (mod 2N) below 2^62 and below 3*2^60. Drawing the
  // second prime from a separate subrange keeps q1 - q2 unstructured;
  // adjacent primes in this congruence class differ by a small power of two,
  // which turns some single-bit ciphertext corruptions into pure bounded
  // noise that decryption silently absorbs.
  u64 two_n = 2 * p.ring_degree;
  u64 q1 = prev_prime_congruent((1ULL << 62) - 1, two_n, 1ULL << 61);
  u64 q2 = prev_prime_congruent(3 * (1ULL << 60) - 1, two_n, 1ULL << 61);
  p.ct_moduli = {q1, q2};
  p.plain_modulus = 786433;  // prime, ≡ 1 (mod 8192), > 4 slots headroom for S=128
  p.noise_stddev = 3.2;
  p.noise_bound = 20;  // ceil(6 * sigma)
  p.relin_decomp_log2 = 16;
  return p;
}

FheParams FheParams::toy() {
  FheParams p;
  p.ring_degree = 8;
  u64 q1 = prev_prime_congruent((1ULL << 31) - 1, 16, 1ULL << 29);
  u64 q2 = prev_prime_congruent(3 * (1ULL << 29) - 1, 16, 1ULL << 29);
  p.ct_moduli = {q1, q2};
  p.plain_modulus = 17;
  p.noise_stddev = 3.2;
  p.noise_bound = 20;
  p.relin_decomp_log2 = 16;
  return p;
}

std::vector<std::uint8_t> FheParams::canonical_bytes() const {
  std::vector<std::uint8_t> out;
  put_u64le(out, ring_degree);
  put_u8(out, static_cast<std::uint8_t>(ct_moduli.size()));
  for (u64 q : ct_moduli) put_u64le(out, q);
  put_u64le(out, plain_modulus);
  put_f64le(out, noise_stddev);
  put_u64le(out, noise_bound);
  put_u8(out, static_cast<std::uint8_t>(relin_decomp_log2));
  put_u8(out, 8);  // residue width in bytes
  return out;
}

ParamsId FheParams::fingerprint() const {
  auto bytes = canonical_bytes();
  auto h = sha256(bytes.data(), bytes.size());
  ParamsId id{};
  std::copy(h.begin(), h.begin() + 16, id.begin());
  return id;
}

std::shared_ptr<const FheContext> FheContext::create(const FheParams& params) {
  return std::shared_ptr<const FheContext>(new FheContext(params));
}

FheContext::FheContext(const FheParams& params) : params_(params) {
  u64 n = params.ring_degree;
  if (n < 4 || (n & (n - 1)) != 0) throw ParameterError("ring degree must be a power of two >= 4");
  n_ = n;
  log_n_ = __builtin_ctzll(n);
  u64 two_n = 2 * n;

  if (params.ct_moduli.empty()) throw ParameterError("no ciphertext moduli");
  for (u64 q : params.ct_moduli) {
    if (q >= (1ULL << 63)) throw ParameterError("ciphertext modulus too large");
    if (!is_prime_u64(q)) throw ParameterError("ciphertext modulus not prime");
    if ((q - 1) % two_n != 0) throw ParameterError("ciphertext modulus not ≡ 1 (mod 2N)");
  }
  for (std::size_t i = 0; i < params.ct_moduli.size(); ++i)
    for (std::size_t j = i + 1; j < params.ct_moduli.size(); ++j)
      if (params.ct_moduli[i] == params.ct_moduli[j])
        throw ParameterError("ciphertext moduli must be distinct");

  u64 t = params.plain_modulus;
  if (!is_prime_u64(t)) throw ParameterError("plain modulus not prime");
  if ((t - 1) % two_n != 0) throw ParameterError("plain modulus not ≡ 1 (mod 2N)");
  for (u64 q : params.ct_moduli)
    if (q == t) throw ParameterError("plain modulus collides with a ciphertext modulus");

  if (params.noise_stddev <= 0) throw ParameterError("noise stddev must be positive");
  if (params.noise_bound == 0 || params.noise_bound > 255)
    throw ParameterError("noise bound out of range");
  if (params.relin_decomp_log2 < 1 || params.relin_decomp_log2 > 62)
    throw ParameterError("relin decomposition width out of range");

  id_ = params.fingerprint();

  q_total_ = U384(1);
  for (u64 q : params.ct_moduli) q_total_.mul_u64(q);
  q_half_ = q_total_;
  q_half_.divmod_u64(2);
  q_bits_ = q_total_.bit_length();
  ks_digits_ = (q_bits_ + params.relin_decomp_log2 - 1) / params.relin_decomp_log2;

  // Headroom check for one multiplication: q > 4 * t^2 * N.
  U384 need(4);
  need.mul_u64(t);
  need.mul_u64(t);
  need.mul_u64(n);
  if (q_total_.cmp(need) <= 0) throw ParameterError("q too small for one multiplication at t, N");

  max_scale_ = 0;
  while (4 * (2 * (max_scale_ + 2)) * (2 * (max_scale_ + 2)) < t) ++max_scale_;

  for (u64 q : params.ct_moduli) ct_ntt_.emplace_back(q, n_);
  t_ntt_ = std::make_unique<NttTable>(t, n_);

  // Auxiliary basis: product must exceed 2*N*q^2 so centered tensor
  // coefficients reconstruct exactly. Primes picked descending from 2^62,
  // skipping the ciphertext moduli and t.
  {
    int need_bits = 2 * q_bits_ + log_n_ + 2;
    u64 c = (1ULL << 62) - 1;
    U384 prod(1);
    while (prod.bit_length() <= need_bits) {
      u64 p = prev_prime_congruent(c, two_n, 1ULL << 40);
      bool clash = p == t;
      for (u64 q : params.ct_moduli) clash = clash || (p == q);
      if (!clash) {
        aux_moduli_.push_back(p);
        prod.mul_u64(p);
      }
      c = p - 1;
    }
    aux_total_ = prod;
    aux_half_ = prod;
    aux_half_.divmod_u64(2);
    for (u64 p : aux_moduli_) aux_ntt_.emplace_back(p, n_);
  }

  // Garner constants: ipm[i] = (prod_{j<i} m_j)^-1 mod m_i.
  auto make_ipm = [](const std::vector<u64>& mods) {
    std::vector<u64> ipm(mods.size(), 1);
    for (std::size_t i = 1; i < mods.size(); ++i) {
      u64 prod = 1;
      for (std::size_t j = 0; j < i; ++j) prod = mul_mod(prod, mods[j] % mods[i], mods[i]);
      ipm[i] = inv_mod(prod, mods[i]);
    }
    return ipm;
  };
  q_garner_ipm_ = make_ipm(params.ct_moduli);
  aux_garner_ipm_ = make_ipm(aux_moduli_);

  // Discrete Gaussian CDT over [-B, B], probabilities scaled to 2^64-1.
  {
    u64 B = params.noise_bound;
    long double sigma = params.noise_stddev;
    std::vector<long double> w(2 * B + 1);
    long double z = 0;
    for (u64 i = 0; i < 2 * B + 1; ++i) {
      long double k = static_cast<long double>(i) - static_cast<long double>(B);
      w[i] = std::exp(-(k * k) / (2.0L * sigma * sigma));
      z += w[i];
    }
    cdt_.resize(2 * B + 1);
    long double cum = 0;
    for (u64 i = 0; i < 2 * B + 1; ++i) {
      cum += w[i] / z;
      long double scaled = cum * 18446744073709551615.0L;
      cdt_[i] = scaled >= 18446744073709551615.0L ? UINT64_MAX : static_cast<u64>(scaled);
    }
    cdt_.back() = UINT64_MAX;
  }
}

U384 FheContext::garner(const u64* r, const std::vector<u64>& mods, const std::vector<u64>& ipm) {
  std::size_t k = mods.size();
  u64 digits[8];
  for (std::size_t i = 0; i < k; ++i) {
    // value-so-far mod m_i via Horner over the mixed-radix digits
    u64 vm = 0;
    for (std::size_t j = i; j-- > 0;) {
      vm = mul_mod(vm, mods[j] % mods[i], mods[i]);
      vm = add_mod(vm, digits[j] % mods[i], mods[i]);
    }
    u64 diff = sub_mod(r[i] % mods[i], vm, mods[i]);
    digits[i] = mul_mod(diff, ipm[i], mods[i]);
  }
  U384 x(digits[k - 1]);
  for (std::size_t j = k - 1; j-- > 0;) {
    x.mul_u64(mods[j]);
    x.add_u64(digits[j]);
  }
  return x;
}

U384 FheContext::lift_q(const u64* r) const { return garner(r, params_.ct_moduli, q_garner_ipm_); }

U384 FheContext::lift_aux(const u64* r) const { return garner(r, aux_moduli_, aux_garner_ipm_); }

}  // namespace hb::rlwe
