#include "hb/proto/messages.hpp"

namespace hb::proto {

namespace {

void put_blob(std::vector<std::uint8_t>& out, const std::vector<std::uint8_t>& blob) {
  put_u32le(out, static_cast<std::uint32_t>(blob.size()));
  put_bytes(out, blob.data(), blob.size());
}

std::vector<std::uint8_t> read_blob(ByteReader& r) {
  std::uint32_t len = r.u32le();
  auto blob = r.take(len);
  if (rlwe::container_magic(blob) == rlwe::kMagicSecretKey)
    throw SecretKeyRefusedError("secret-key container refused at the frame layer");
  return blob;
}

void put_string(std::vector<std::uint8_t>& out, const std::string& s) {
  put_u32le(out, static_cast<std::uint32_t>(s.size()));
  put_bytes(out, s.data(), s.size());
}

std::string read_string(ByteReader& r) {
  std::uint32_t len = r.u32le();
  if (len > 4096) throw DecodeError("string field too long");
  std::string s(len, '\0');
  r.bytes(s.data(), len);
  return s;
}

void expect_type(const Frame& frame, MsgType t) {
  if (frame.type != t) throw DecodeError("unexpected frame type for this parser");
}

}  // namespace

Frame encode_enroll_request(const EnrollRequest& req) {
  Frame f;
  f.type = MsgType::kEnrollReq;
  put_string(f.payload, req.subject_id);
  put_string(f.payload, req.modality);
  std::uint8_t flags = 0;
  if (req.rlk_bytes) flags |= 1;
  if (req.gks_bytes) flags |= 2;
  put_u8(f.payload, flags);
  put_blob(f.payload, req.pk_bytes);
  if (req.rlk_bytes) put_blob(f.payload, *req.rlk_bytes);
  if (req.gks_bytes) put_blob(f.payload, *req.gks_bytes);
  put_u32le(f.payload, static_cast<std::uint32_t>(req.templates.size()));
  for (const auto& [rotation, ct] : req.templates) {
    put_u32le(f.payload, static_cast<std::uint32_t>(rotation));
    put_blob(f.payload, ct);
  }
  return f;
}

EnrollRequest parse_enroll_request(const Frame& frame) {
  expect_type(frame, MsgType::kEnrollReq);
  ByteReader r(frame.payload);
  EnrollRequest req;
  req.subject_id = read_string(r);
  req.modality = read_string(r);
  std::uint8_t flags = r.u8();
  req.pk_bytes = read_blob(r);
  if (flags & 1) req.rlk_bytes = read_blob(r);
  if (flags & 2) req.gks_bytes = read_blob(r);
  std::uint32_t count = r.u32le();
  for (std::uint32_t i = 0; i < count; ++i) {
    auto rotation = static_cast<std::int32_t>(r.u32le());
    req.templates.emplace_back(rotation, read_blob(r));
  }
  r.expect_done();
  return req;
}

Frame encode_enroll_ack(const EnrollAck& ack) {
  Frame f;
  f.type = MsgType::kEnrollAck;
  put_u32le(f.payload, static_cast<std::uint32_t>(ack.template_ids.size()));
  for (const auto& id : ack.template_ids) put_string(f.payload, id);
  return f;
}

EnrollAck parse_enroll_ack(const Frame& frame) {
  expect_type(frame, MsgType::kEnrollAck);
  ByteReader r(frame.payload);
  EnrollAck ack;
  std::uint32_t count = r.u32le();
  for (std::uint32_t i = 0; i < count; ++i) ack.template_ids.push_back(read_string(r));
  r.expect_done();
  return ack;
}

Frame encode_verify_request(const VerifyRequest& req) {
  Frame f;
  f.type = MsgType::kVerifyReq;
  put_string(f.payload, req.subject_id);
  put_u8(f.payload, req.mode);
  put_blob(f.payload, req.probe_ct);
  return f;
}

VerifyRequest parse_verify_request(const Frame& frame) {
  expect_type(frame, MsgType::kVerifyReq);
  ByteReader r(frame.payload);
  VerifyRequest req;
  req.subject_id = read_string(r);
  req.mode = r.u8();
  req.probe_ct = read_blob(r);
  r.expect_done();
  return req;
}

Frame encode_verify_resp_item(const VerifyRespItem& item) {
  Frame f;
  f.type = MsgType::kVerifyRespItem;
  put_u32le(f.payload, item.entry_index);
  put_u32le(f.payload, static_cast<std::uint32_t>(item.rotation));
  put_blob(f.payload, item.result_ct);
  return f;
}

VerifyRespItem parse_verify_resp_item(const Frame& frame) {
  expect_type(frame, MsgType::kVerifyRespItem);
  ByteReader r(frame.payload);
  VerifyRespItem item;
  item.entry_index = r.u32le();
  item.rotation = static_cast<std::int32_t>(r.u32le());
  item.result_ct = read_blob(r);
  r.expect_done();
  return item;
}

std::vector<std::string> container_magics_in_frame(const Frame& frame) {
  std::vector<std::string> magics;
  auto collect = [&](const std::vector<std::uint8_t>& blob) {
    magics.push_back(rlwe::container_magic(blob));
  };
  switch (frame.type) {
    case MsgType::kEnrollReq: {
      ByteReader r(frame.payload);
      read_string(r);
      read_string(r);
      std::uint8_t flags = r.u8();
      collect(r.take(r.u32le()));
      if (flags & 1) collect(r.take(r.u32le()));
      if (flags & 2) collect(r.take(r.u32le()));
      std::uint32_t count = r.u32le();
      for (std::uint32_t i = 0; i < count; ++i) {
        r.u32le();
        collect(r.take(r.u32le()));
      }
      break;
    }
    case MsgType::kVerifyReq: {
      ByteReader r(frame.payload);
      read_string(r);
      r.u8();
      collect(r.take(r.u32le()));
      break;
    }
    case MsgType::kVerifyRespItem: {
      ByteReader r(frame.payload);
      r.u32le();
      r.u32le();
      collect(r.take(r.u32le()));
      break;
    }
    default:
      break;
  }
  return magics;
}

}  // namespace hb::proto
