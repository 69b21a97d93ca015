#pragma once

#include <string>

#include "hb/rlwe/cipher.hpp"

namespace hb::eval {

struct BenchConfig {
  std::uint32_t dim = 1012;
  std::uint32_t scale = 128;
  int repetitions = 20;
  std::uint64_t seed = 7;
  std::string out_path;  // empty = don't write
};

struct BenchResult {
  // medians over repetitions, seconds
  double encrypt_seconds = 0.0;
  double euclid_compute_seconds = 0.0;
  double decrypt_score_seconds = 0.0;
  double total_encrypted_match_seconds = 0.0;  // encrypt + compute + decrypt
  double innerprod_compute_seconds = 0.0;
  double plain_match_seconds = 0.0;
  // serialized container sizes, bytes
  std::size_t ciphertext_bytes = 0;
  std::size_t ciphertext_payload_bytes = 0;
  std::size_t public_key_bytes = 0;
  std::size_t secret_key_bytes = 0;
  std::size_t relin_key_bytes = 0;
  std::size_t galois_keys_bytes = 0;
  std::string hardware;
  std::string report_json;
};

// One-to-one match latency (encrypt probe + server compute + decrypt+score)
// against the plaintext oracle, plus serialized sizes of every container
// type. The published reference pair (1.05 s encrypted / 0.63 s plaintext)
// and key-size table ride along as metadata.
BenchResult run_bench(const rlwe::ContextPtr& ctx, const BenchConfig& config);

}  // namespace hb::eval
