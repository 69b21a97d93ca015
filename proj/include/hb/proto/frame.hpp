#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hb/common.hpp"

namespace hb::proto {

// Wire frame: length (u32, big-endian, payload bytes only) | msg_type (u8) |
// payload. An empty-payload frame is exactly 5 bytes.
enum class MsgType : std::uint8_t {
  kEnrollReq = 0x01,
  kEnrollAck = 0x02,
  kVerifyReq = 0x03,
  kVerifyRespItem = 0x04,
  kVerifyDone = 0x05,
  kError = 0x7F,
};

inline constexpr std::size_t kMaxFramePayload = 64ull * 1024 * 1024;
inline constexpr std::size_t kFrameHeaderBytes = 5;

struct Frame {
  MsgType type = MsgType::kError;
  std::vector<std::uint8_t> payload;
};

struct FrameLengthError : DecodeError {
  using DecodeError::DecodeError;
};
struct FrameTypeError : DecodeError {
  using DecodeError::DecodeError;
};

bool is_known_msg_type(std::uint8_t t);

std::vector<std::uint8_t> encode_frame(const Frame& frame);
// Whole-buffer decode; length must match exactly.
Frame decode_frame(const std::vector<std::uint8_t>& bytes);
// Header-only decode: validates type and length bound, returns payload size.
std::size_t decode_frame_header(const std::uint8_t header[kFrameHeaderBytes], MsgType* type);

// Error frame codes.
enum class ErrorCode : std::uint16_t {
  kMalformed = 1,
  kNotEnrolled = 2,
  kParamsMismatch = 3,
  kSecretKeyRefused = 4,
  kInternal = 5,
  kUnsupportedMode = 6,
  kKeyMaterial = 7,
};

Frame make_error_frame(ErrorCode code, const std::string& message);
std::pair<ErrorCode, std::string> parse_error_frame(const Frame& frame);

// Observation hook for tests (wire taps); outbound = true when sending.
using FrameObserver = std::function<void(bool outbound, const Frame&)>;

}  // namespace hb::proto
