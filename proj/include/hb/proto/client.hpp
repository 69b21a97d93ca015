#pragma once

#include "hb/match/matcher.hpp"
#include "hb/proto/messages.hpp"
#include "hb/proto/socket.hpp"

namespace hb::proto {

struct NotEnrolledError : Error {
  using Error::Error;
};
struct ParamsMismatchError : Error {
  using Error::Error;
};
struct RemoteError : Error {
  using Error::Error;
};

struct EnrollReceipt {
  std::vector<std::string> template_ids;
};

// Uploads the subject's encrypted templates together with the public key
// (and evaluation keys when inner-product verification should be possible).
EnrollReceipt enroll_client(const std::string& host, std::uint16_t port,
                            const rlwe::FheContext& ctx, const std::string& subject_id,
                            const std::string& modality, const rlwe::PublicKey& pk,
                            const std::vector<match::EncryptedGalleryEntry>& templates,
                            const rlwe::RelinKey* rlk = nullptr,
                            const rlwe::GaloisKeySet* gks = nullptr,
                            const FrameObserver& observer = nullptr);

struct VerifyOutcome {
  match::MatchResult result;
  double threshold = 0.0;
  bool accepted = false;
};

// Quantizes, packs and encrypts the probe locally, streams the encrypted
// per-template results back, decrypts and aggregates them locally. The
// secret key never leaves this function's caller.
VerifyOutcome verify_client(const std::string& host, std::uint16_t port,
                            const rlwe::FheContext& ctx, const rlwe::BatchEncoder& encoder,
                            const std::string& claimed_subject_id,
                            const std::vector<double>& probe_features,
                            const codec::EncodingProfile& profile, const rlwe::PublicKey& pk,
                            const rlwe::SecretKey& sk, match::MatchMode mode, double threshold,
                            const Seed& encrypt_seed, const FrameObserver& observer = nullptr);

// Same flow for an already-encrypted probe (used by tests and the CLI).
VerifyOutcome verify_client_ct(const std::string& host, std::uint16_t port,
                               const rlwe::FheContext& ctx, const rlwe::BatchEncoder& encoder,
                               const std::string& claimed_subject_id,
                               const rlwe::Ciphertext& probe_ct,
                               const codec::EncodingProfile& profile, const rlwe::SecretKey& sk,
                               match::MatchMode mode, double threshold,
                               const FrameObserver& observer = nullptr);

}  // namespace hb::proto
