#pragma once

#include <string>

#include "hb/rlwe/cipher.hpp"

namespace hb::rlwe {

// Binary container format shared by every serialized object:
//   magic (4 ASCII bytes) | version (0x01) | params fingerprint (16 bytes) |
//   little-endian payload.
// Polynomials are stored in the coefficient domain, coefficient-major, with
// one fixed-width 8-byte residue per ciphertext modulus (16 bytes per
// coefficient at production parameters).
inline constexpr char kMagicParams[] = "HBPR";
inline constexpr char kMagicSecretKey[] = "HBSK";
inline constexpr char kMagicPublicKey[] = "HBPK";
inline constexpr char kMagicRelinKey[] = "HBRK";
inline constexpr char kMagicGaloisKeys[] = "HBGK";
inline constexpr char kMagicCiphertext[] = "HBCT";
inline constexpr std::uint8_t kContainerVersion = 0x01;
inline constexpr std::size_t kContainerHeaderBytes = 4 + 1 + 16;

struct BadMagicError : DecodeError {
  using DecodeError::DecodeError;
};
struct BadVersionError : DecodeError {
  using DecodeError::DecodeError;
};
struct FingerprintMismatchError : DecodeError {
  using DecodeError::DecodeError;
};

// First four bytes as a string ("HBCT", ...); empty if too short.
std::string container_magic(const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> serialize_params(const FheParams& params);
FheParams parse_params(const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> serialize_secret_key(const FheContext& ctx, const SecretKey& sk);
SecretKey parse_secret_key(const FheContext& ctx, const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> serialize_public_key(const FheContext& ctx, const PublicKey& pk);
PublicKey parse_public_key(const FheContext& ctx, const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> serialize_relin_key(const FheContext& ctx, const RelinKey& rk);
RelinKey parse_relin_key(const FheContext& ctx, const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> serialize_galois_keys(const FheContext& ctx, const GaloisKeySet& gks);
GaloisKeySet parse_galois_keys(const FheContext& ctx, const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> serialize_ciphertext(const FheContext& ctx, const Ciphertext& ct);
Ciphertext parse_ciphertext(const FheContext& ctx, const std::vector<std::uint8_t>& bytes);

}  // namespace hb::rlwe
