#include "hb/bio/iris.hpp"

#include <cstring>

namespace hb::bio {

std::size_t IrisCode::popcount() const {
  std::size_t total = 0;
  for (std::uint8_t b : bits) total += static_cast<std::size_t>(__builtin_popcount(b));
  return total;
}

IrisCode rotate_iris(const IrisCode& code, int shift) {
  int s = shift % static_cast<int>(IrisCode::kCols);
  if (s < 0) s += static_cast<int>(IrisCode::kCols);
  IrisCode out;
  out.subject_id = code.subject_id;
  out.session_id = code.session_id;
  out.eye = code.eye;
  if (s == 0) {
    out.bits = code.bits;
    return out;
  }
  auto us = static_cast<std::size_t>(s);
  for (std::size_t r = 0; r < IrisCode::kRows; ++r) {
    for (std::size_t c = 0; c < IrisCode::kCols; ++c) {
      if (code.get(r, c)) out.set(r, (c + us) % IrisCode::kCols, true);
    }
  }
  return out;
}

std::vector<std::uint8_t> flatten(const IrisCode& code) {
  std::vector<std::uint8_t> v(IrisCode::kRows * IrisCode::kCols);
  for (std::size_t r = 0; r < IrisCode::kRows; ++r)
    for (std::size_t c = 0; c < IrisCode::kCols; ++c) v[r * IrisCode::kCols + c] = code.get(r, c);
  return v;
}

std::vector<std::uint8_t> concat_irises(const std::vector<std::uint8_t>& left,
                                        const std::vector<std::uint8_t>& right) {
  constexpr std::size_t kFlat = IrisCode::kRows * IrisCode::kCols;
  if (left.size() != kFlat || right.size() != kFlat)
    throw UsageError("concat_irises expects two 65536-length vectors");
  std::vector<std::uint8_t> out;
  out.reserve(2 * kFlat);
  out.insert(out.end(), left.begin(), left.end());
  out.insert(out.end(), right.begin(), right.end());
  return out;
}

std::vector<std::vector<std::uint8_t>> rotation_gallery(const IrisCode& left,
                                                        const IrisCode& right) {
  std::vector<std::vector<std::uint8_t>> out;
  out.reserve(2 * kRotationRange + 1);
  for (int r = -kRotationRange; r <= kRotationRange; ++r)
    out.push_back(concat_irises(flatten(rotate_iris(left, r)), flatten(rotate_iris(right, r))));
  return out;
}

std::vector<std::uint8_t> icod_bytes(const IrisCode& code) {
  std::vector<std::uint8_t> out;
  put_bytes(out, "ICOD", 4);
  put_u8(out, 0x01);
  put_u16le(out, IrisCode::kRows);
  put_u16le(out, IrisCode::kCols);
  put_bytes(out, code.bits.data(), code.bits.size());
  return out;
}

IrisCode parse_icod(const std::vector<std::uint8_t>& bytes) {
  ByteReader r(bytes);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, "ICOD", 4) != 0) throw DecodeError("ICOD magic mismatch");
  if (r.u8() != 0x01) throw DecodeError("unsupported ICOD version");
  if (r.u16le() != IrisCode::kRows || r.u16le() != IrisCode::kCols)
    throw DecodeError("ICOD dimensions must be 128x512");
  IrisCode code;
  r.bytes(code.bits.data(), code.bits.size());
  r.expect_done();
  return code;
}

void write_icod(const std::string& path, const IrisCode& code) {
  atomic_write_file(path, icod_bytes(code));
}

IrisCode read_icod(const std::string& path) { return parse_icod(read_file(path)); }

}  // namespace hb::bio
