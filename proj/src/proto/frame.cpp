#include "hb/proto/frame.hpp"

namespace hb::proto {

bool is_known_msg_type(std::uint8_t t) {
  switch (static_cast<MsgType>(t)) {
    case MsgType::kEnrollReq:
    case MsgType::kEnrollAck:
    case MsgType::kVerifyReq:
    case MsgType::kVerifyRespItem:
    case MsgType::kVerifyDone:
    case MsgType::kError:
      return true;
  }
  return false;
}

std::vector<std::uint8_t> encode_frame(const Frame& frame) {
  if (frame.payload.size() > kMaxFramePayload) throw FrameLengthError("frame payload too large");
  std::vector<std::uint8_t> out;
  out.reserve(kFrameHeaderBytes + frame.payload.size());
  auto len = static_cast<std::uint32_t>(frame.payload.size());
  out.push_back(static_cast<std::uint8_t>(len >> 24));
  out.push_back(static_cast<std::uint8_t>(len >> 16));
  out.push_back(static_cast<std::uint8_t>(len >> 8));
  out.push_back(static_cast<std::uint8_t>(len));
  out.push_back(static_cast<std::uint8_t>(frame.type));
  out.insert(out.end(), frame.payload.begin(), frame.payload.end());
  return out;
}

std::size_t decode_frame_header(const std::uint8_t header[kFrameHeaderBytes], MsgType* type) {
  std::uint32_t len = (static_cast<std::uint32_t>(header[0]) << 24) |
                      (static_cast<std::uint32_t>(header[1]) << 16) |
                      (static_cast<std::uint32_t>(header[2]) << 8) | header[3];
  if (len > kMaxFramePayload) throw FrameLengthError("frame length exceeds the 64 MiB bound");
  if (!is_known_msg_type(header[4])) throw FrameTypeError("unknown frame type");
  if (type) *type = static_cast<MsgType>(header[4]);
  return len;
}

Frame decode_frame(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kFrameHeaderBytes) throw DecodeError("truncated frame header");
  MsgType type;
  std::size_t len = decode_frame_header(bytes.data(), &type);
  if (bytes.size() != kFrameHeaderBytes + len) throw DecodeError("frame length field mismatch");
  Frame f;
  f.type = type;
  f.payload.assign(bytes.begin() + kFrameHeaderBytes, bytes.end());
  return f;
}

Frame make_error_frame(ErrorCode code, const std::string& message) {
  Frame f;
  f.type = MsgType::kError;
  put_u16le(f.payload, static_cast<std::uint16_t>(code));
  put_u32le(f.payload, static_cast<std::uint32_t>(message.size()));
  put_bytes(f.payload, message.data(), message.size());
  return f;
}

std::pair<ErrorCode, std::string> parse_error_frame(const Frame& frame) {
  if (frame.type != MsgType::kError) throw UsageError("not an error frame");
  ByteReader r(frame.payload);
  auto code = static_cast<ErrorCode>(r.u16le());
  std::uint32_t len = r.u32le();
  std::string msg(len, '\0');
  r.bytes(msg.data(), len);
  r.expect_done();
  return {code, msg};
}

}  // namespace hb::proto
