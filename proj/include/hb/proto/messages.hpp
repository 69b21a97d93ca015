#pragma once

#include <optional>

#include "hb/proto/frame.hpp"
#include "hb/rlwe/serial.hpp"

namespace hb::proto {

// Raised when a frame carries a container whose magic is the secret-key
// magic; checked at parse positions before any deserialization.
struct SecretKeyRefusedError : KeyMaterialError {
  using KeyMaterialError::KeyMaterialError;
};

// Length-delimited container field inside a payload: u32 length + bytes.
// Every read checks the leading magic against the secret-key magic.

struct EnrollRequest {
  std::string subject_id;
  std::string modality;
  std::vector<std::uint8_t> pk_bytes;
  std::optional<std::vector<std::uint8_t>> rlk_bytes;
  std::optional<std::vector<std::uint8_t>> gks_bytes;
  std::vector<std::pair<int, std::vector<std::uint8_t>>> templates;  // rotation, HBCT container
};

Frame encode_enroll_request(const EnrollRequest& req);
EnrollRequest parse_enroll_request(const Frame& frame);

struct EnrollAck {
  std::vector<std::string> template_ids;
};

Frame encode_enroll_ack(const EnrollAck& ack);
EnrollAck parse_enroll_ack(const Frame& frame);

struct VerifyRequest {
  std::string subject_id;
  std::uint8_t mode = 1;  // 1 = euclid, 2 = innerprod
  std::vector<std::uint8_t> probe_ct;
};

Frame encode_verify_request(const VerifyRequest& req);
VerifyRequest parse_verify_request(const Frame& frame);

struct VerifyRespItem {
  std::uint32_t entry_index = 0;
  int rotation = 0;
  std::vector<std::uint8_t> result_ct;
};

Frame encode_verify_resp_item(const VerifyRespItem& item);
VerifyRespItem parse_verify_resp_item(const Frame& frame);

// Walks a frame and yields every embedded container field (for wire taps).
std::vector<std::string> container_magics_in_frame(const Frame& frame);

}  // namespace hb::proto
