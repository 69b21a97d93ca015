#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <cstring>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hb {

// Error taxonomy. Every throwing path in the library uses one of these so
// callers (and tests) can tell misuse apart from bad data or bad key material.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParameterError : Error {
  using Error::Error;
};
struct UsageError : Error {
  using Error::Error;
};
struct CapacityError : Error {
  using Error::Error;
};
struct OverflowError : Error {
  using Error::Error;
};
struct KeyMaterialError : Error {
  using Error::Error;
};
struct CorruptionError : Error {
  using Error::Error;
};
struct DecodeError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};
struct DegenerateInputError : Error {
  using Error::Error;
};
struct InsufficientDataError : Error {
  using Error::Error;
};

// 32-byte seed; every randomized operation takes one explicitly.
using Seed = std::array<std::uint8_t, 32>;

Seed seed_from_u64(std::uint64_t x);
Seed seed_from_hex(const std::string& hex);
std::string seed_to_hex(const Seed& s);

// Deterministic child seed: SHA-256(parent || label || index), truncated to 32 bytes.
Seed derive_seed(const Seed& parent, const std::string& label, std::uint64_t index = 0);

// Deterministic PRNG stream from a Seed (mt19937_64 via seed_seq; both are
// pinned by the standard, so streams are identical across builds).
class Prng {
 public:
  explicit Prng(const Seed& seed);

  std::uint64_t next_u64() { return gen_(); }
  // Uniform in [0, bound) by rejection; bound > 0.
  std::uint64_t uniform_below(std::uint64_t bound);
  double uniform_unit();  // [0, 1)
  double gaussian(double stddev);

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Little-endian scalar IO on byte buffers.
void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v);
void put_u16le(std::vector<std::uint8_t>& out, std::uint16_t v);
void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v);
void put_u64le(std::vector<std::uint8_t>& out, std::uint64_t v);
void put_f64le(std::vector<std::uint8_t>& out, double v);
void put_bytes(std::vector<std::uint8_t>& out, const void* p, std::size_t n);

// Cursor-based reader that throws DecodeError on truncation.
class ByteReader {
 public:
  ByteReader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}
  explicit ByteReader(const std::vector<std::uint8_t>& v) : data_(v.data()), size_(v.size()) {}

  std::uint8_t u8();
  std::uint16_t u16le();
  std::uint32_t u32le();
  std::uint64_t u64le();
  double f64le();
  void bytes(void* dst, std::size_t n);
  std::vector<std::uint8_t> take(std::size_t n);
  std::size_t remaining() const { return size_ - pos_; }
  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ == size_; }
  void expect_done() const;

 private:
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

std::array<std::uint8_t, 32> sha256(const void* data, std::size_t size);

// Runs fn(i) for i in [0, n) across up to `threads` workers (0 = hardware
// count). Used where the spec allows parallelism over independent items;
// results must not depend on execution order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  unsigned threads = 0);

// Atomic file replace: write to <path>.tmp.<rand>, fsync, rename over path.
void atomic_write_file(const std::string& path, const std::vector<std::uint8_t>& bytes);
void atomic_write_file(const std::string& path, const std::string& text);
std::vector<std::uint8_t> read_file(const std::string& path);
std::string read_text_file(const std::string& path);

}  // namespace hb
