#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hb/common.hpp"

namespace hb::bio {

// 128x512 binary iris template. Bits are packed row-major, MSB-first within
// each byte (the on-disk "ICOD" layout). Angular head tilt shows up as a
// circular column shift, which is what rotate() models.
struct IrisCode {
  static constexpr std::size_t kRows = 128;
  static constexpr std::size_t kCols = 512;
  static constexpr std::size_t kBytes = kRows * kCols / 8;

  std::vector<std::uint8_t> bits = std::vector<std::uint8_t>(kBytes, 0);
  std::string subject_id;
  std::string session_id;
  char eye = 'L';

  bool get(std::size_t r, std::size_t c) const {
    std::size_t idx = r * kCols + c;
    return (bits[idx / 8] >> (7 - (idx % 8))) & 1;
  }
  void set(std::size_t r, std::size_t c, bool v) {
    std::size_t idx = r * kCols + c;
    std::uint8_t mask = static_cast<std::uint8_t>(1 << (7 - (idx % 8)));
    if (v) {
      bits[idx / 8] |= mask;
    } else {
      bits[idx / 8] &= static_cast<std::uint8_t>(~mask);
    }
  }

  std::size_t popcount() const;
};

// Circular column shift: column j of the input lands in column
// (j + shift) mod 512. Rows are untouched; shift is reduced mod 512.
IrisCode rotate_iris(const IrisCode& code, int shift);

// Row-wise flattening: element (r, c) lands at index r*512 + c. Entries 0/1.
std::vector<std::uint8_t> flatten(const IrisCode& code);

// left occupies [0, 65536), right [65536, 131072).
std::vector<std::uint8_t> concat_irises(const std::vector<std::uint8_t>& left,
                                        const std::vector<std::uint8_t>& right);

// The 15 gallery variants: for r in -7..+7 (ascending), the same shift r is
// applied to each eye before flatten+concat, so the r=0 entry equals the
// unrotated concatenation.
std::vector<std::vector<std::uint8_t>> rotation_gallery(const IrisCode& left,
                                                        const IrisCode& right);
inline constexpr int kRotationRange = 7;

// "ICOD" container: magic, version 0x01, u16 rows, u16 cols, bit-packed
// payload (8192 bytes).
std::vector<std::uint8_t> icod_bytes(const IrisCode& code);
IrisCode parse_icod(const std::vector<std::uint8_t>& bytes);
void write_icod(const std::string& path, const IrisCode& code);
IrisCode read_icod(const std::string& path);

}  // namespace hb::bio
