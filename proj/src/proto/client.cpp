#include "hb/proto/client.hpp"

#include <chrono>

namespace hb::proto {

namespace {

[[noreturn]] void raise_remote(const Frame& frame) {
  auto [code, msg] = parse_error_frame(frame);
  switch (code) {
    case ErrorCode::kNotEnrolled:
      throw NotEnrolledError("subject not enrolled: " + msg);
    case ErrorCode::kParamsMismatch:
      throw ParamsMismatchError(msg);
    default:
      throw RemoteError("server error " + std::to_string(static_cast<int>(code)) + ": " + msg);
  }
}

}  // namespace

EnrollReceipt enroll_client(const std::string& host, std::uint16_t port,
                            const rlwe::FheContext& ctx, const std::string& subject_id,
                            const std::string& modality, const rlwe::PublicKey& pk,
                            const std::vector<match::EncryptedGalleryEntry>& templates,
                            const rlwe::RelinKey* rlk, const rlwe::GaloisKeySet* gks,
                            const FrameObserver& observer) {
  EnrollRequest req;
  req.subject_id = subject_id;
  req.modality = modality;
  req.pk_bytes = rlwe::serialize_public_key(ctx, pk);
  if (rlk) req.rlk_bytes = rlwe::serialize_relin_key(ctx, *rlk);
  if (gks) req.gks_bytes = rlwe::serialize_galois_keys(ctx, *gks);
  for (const auto& t : templates)
    req.templates.emplace_back(t.rotation, rlwe::serialize_ciphertext(ctx, t.ct));

  Socket sock = Socket::connect_tcp(host, port);
  sock.send_frame(encode_enroll_request(req), observer);
  Frame resp = sock.recv_frame(observer);
  if (resp.type == MsgType::kError) raise_remote(resp);
  EnrollReceipt receipt;
  receipt.template_ids = parse_enroll_ack(resp).template_ids;
  return receipt;
}

VerifyOutcome verify_client_ct(const std::string& host, std::uint16_t port,
                               const rlwe::FheContext& ctx, const rlwe::BatchEncoder& encoder,
                               const std::string& claimed_subject_id,
                               const rlwe::Ciphertext& probe_ct,
                               const codec::EncodingProfile& profile, const rlwe::SecretKey& sk,
                               match::MatchMode mode, double threshold,
                               const FrameObserver& observer) {
  if (mode == match::MatchMode::kPlain) throw UsageError("plain mode does not use the protocol");
  VerifyRequest req;
  req.subject_id = claimed_subject_id;
  req.mode = mode == match::MatchMode::kEuclid ? 1 : 2;
  req.probe_ct = rlwe::serialize_ciphertext(ctx, probe_ct);

  auto start = std::chrono::steady_clock::now();
  Socket sock = Socket::connect_tcp(host, port);
  sock.send_frame(encode_verify_request(req), observer);

  std::vector<match::PerTemplateResult> entries;
  for (;;) {
    Frame frame = sock.recv_frame(observer);
    if (frame.type == MsgType::kError) raise_remote(frame);
    if (frame.type == MsgType::kVerifyDone) break;
    if (frame.type != MsgType::kVerifyRespItem) throw RemoteError("unexpected frame in verify");
    auto item = parse_verify_resp_item(frame);
    auto result_ct = rlwe::parse_ciphertext(ctx, item.result_ct);
    auto scored = match::client_score(ctx, encoder, mode, result_ct, sk, profile);
    scored.entry_index = item.entry_index;
    scored.rotation = item.rotation;
    entries.push_back(scored);
  }
  if (entries.empty()) throw RemoteError("server returned no results");

  VerifyOutcome outcome;
  outcome.result.mode = mode;
  outcome.result.entries = std::move(entries);
  outcome.result.best = match::aggregate_min_distance(outcome.result.entries);
  outcome.result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  outcome.threshold = threshold;
  outcome.accepted = outcome.result.best.similarity >= threshold;
  return outcome;
}

VerifyOutcome verify_client(const std::string& host, std::uint16_t port,
                            const rlwe::FheContext& ctx, const rlwe::BatchEncoder& encoder,
                            const std::string& claimed_subject_id,
                            const std::vector<double>& probe_features,
                            const codec::EncodingProfile& profile, const rlwe::PublicKey& pk,
                            const rlwe::SecretKey& sk, match::MatchMode mode, double threshold,
                            const Seed& encrypt_seed, const FrameObserver& observer) {
  auto qt = codec::quantize(codec::unit_normalize(probe_features), profile);
  auto probe_ct = rlwe::encrypt(ctx, pk, codec::pack_template(qt, encoder), encrypt_seed);
  return verify_client_ct(host, port, ctx, encoder, claimed_subject_id, probe_ct, profile, sk,
                          mode, threshold, observer);
}

}  // namespace hb::proto
