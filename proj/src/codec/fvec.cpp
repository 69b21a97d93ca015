#include "hb/codec/fvec.hpp"

#include <cstring>

namespace hb::codec {

namespace {
constexpr std::uint8_t kVersion = 0x01;

ByteReader open(const std::vector<std::uint8_t>& bytes, const char* magic) {
  ByteReader r(bytes);
  char got[4];
  r.bytes(got, 4);
  if (std::memcmp(got, magic, 4) != 0) throw DecodeError("file magic mismatch");
  if (r.u8() != kVersion) throw DecodeError("unsupported file version");
  return r;
}
}  // namespace

std::vector<std::uint8_t> fvec_bytes(const std::vector<double>& v) {
  std::vector<std::uint8_t> out;
  put_bytes(out, "FVEC", 4);
  put_u8(out, kVersion);
  put_u32le(out, static_cast<std::uint32_t>(v.size()));
  for (double x : v) put_f64le(out, x);
  return out;
}

std::vector<double> parse_fvec(const std::vector<std::uint8_t>& bytes) {
  ByteReader r = open(bytes, "FVEC");
  std::uint32_t dim = r.u32le();
  std::vector<double> v(dim);
  for (auto& x : v) x = r.f64le();
  r.expect_done();
  return v;
}

void write_fvec(const std::string& path, const std::vector<double>& v) {
  atomic_write_file(path, fvec_bytes(v));
}

std::vector<double> read_fvec(const std::string& path) { return parse_fvec(read_file(path)); }

std::vector<std::uint8_t> qtpl_bytes(const QuantizedTemplate& qt) {
  std::vector<std::uint8_t> out;
  put_bytes(out, "QTPL", 4);
  put_u8(out, kVersion);
  put_u32le(out, qt.profile.dim);
  put_u32le(out, qt.profile.scale);
  for (std::int32_t v : qt.values) put_u32le(out, static_cast<std::uint32_t>(v));
  return out;
}

QuantizedTemplate parse_qtpl(const std::vector<std::uint8_t>& bytes, const rlwe::FheContext& ctx) {
  ByteReader r = open(bytes, "QTPL");
  std::uint32_t dim = r.u32le();
  std::uint32_t scale = r.u32le();
  QuantizedTemplate qt;
  qt.profile = make_profile(ctx, dim, scale);
  qt.values.resize(dim);
  auto limit = static_cast<std::int32_t>(scale) + 1;
  for (auto& v : qt.values) {
    v = static_cast<std::int32_t>(r.u32le());
    if (v > limit || v < -limit) throw DecodeError("quantized value out of range");
  }
  r.expect_done();
  return qt;
}

void write_qtpl(const std::string& path, const QuantizedTemplate& qt) {
  atomic_write_file(path, qtpl_bytes(qt));
}

QuantizedTemplate read_qtpl(const std::string& path, const rlwe::FheContext& ctx) {
  return parse_qtpl(read_file(path), ctx);
}

}  // namespace hb::codec
