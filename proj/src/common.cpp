#include "hb/common.hpp"

#include <openssl/sha.h>
#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

namespace hb {

Seed seed_from_u64(std::uint64_t x) {
  Seed s{};
  for (int i = 0; i < 8; ++i) s[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(x >> (8 * i));
  return s;
}

static int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

Seed seed_from_hex(const std::string& hex) {
  Seed s{};
  if (hex.size() > 64) throw UsageError("seed hex longer than 64 chars");
  for (std::size_t i = 0; i < hex.size(); ++i) {
    int v = hex_nibble(hex[i]);
    if (v < 0) throw UsageError("bad hex char in seed");
    std::size_t byte = i / 2;
    s[byte] = static_cast<std::uint8_t>((s[byte] << 4) | v);
  }
  return s;
}

std::string seed_to_hex(const Seed& s) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (auto b : s) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

Seed derive_seed(const Seed& parent, const std::string& label, std::uint64_t index) {
  std::vector<std::uint8_t> buf(parent.begin(), parent.end());
  buf.insert(buf.end(), label.begin(), label.end());
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>(index >> (8 * i)));
  auto h = sha256(buf.data(), buf.size());
  Seed out{};
  std::memcpy(out.data(), h.data(), 32);
  return out;
}

Prng::Prng(const Seed& seed) {
  std::array<std::uint32_t, 8> words{};
  for (std::size_t i = 0; i < 8; ++i) {
    std::uint32_t w = 0;
    for (std::size_t j = 0; j < 4; ++j) w |= static_cast<std::uint32_t>(seed[4 * i + j]) << (8 * j);
    words[i] = w;
  }
  std::seed_seq seq(words.begin(), words.end());
  gen_.seed(seq);
}

std::uint64_t Prng::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw UsageError("uniform_below: zero bound");
  // Rejection sampling over the largest multiple of bound.
  std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  for (;;) {
    std::uint64_t v = gen_();
    if (v < limit || limit == 0) return v % bound;
  }
}

double Prng::uniform_unit() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Prng::gaussian(double stddev) {
  // Box-Muller; deterministic since it only consumes gen_() words.
  if (have_spare_) {
    have_spare_ = false;
    return spare_ * stddev;
  }
  double u1 = 0.0;
  while (u1 == 0.0) u1 = uniform_unit();
  double u2 = uniform_unit();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 6.283185307179586476925286766559 * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a) * stddev;
}

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }

void put_u16le(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64le(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64le(std::vector<std::uint8_t>& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64le(out, bits);
}

void put_bytes(std::vector<std::uint8_t>& out, const void* p, std::size_t n) {
  const auto* b = static_cast<const std::uint8_t*>(p);
  out.insert(out.end(), b, b + n);
}

std::uint8_t ByteReader::u8() {
  if (pos_ + 1 > size_) throw DecodeError("truncated: u8");
  return data_[pos_++];
}

std::uint16_t ByteReader::u16le() {
  if (pos_ + 2 > size_) throw DecodeError("truncated: u16");
  std::uint16_t v = static_cast<std::uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
  pos_ += 2;
  return v;
}

std::uint32_t ByteReader::u32le() {
  if (pos_ + 4 > size_) throw DecodeError("truncated: u32");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
  pos_ += 4;
  return v;
}

std::uint64_t ByteReader::u64le() {
  if (pos_ + 8 > size_) throw DecodeError("truncated: u64");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
  pos_ += 8;
  return v;
}

double ByteReader::f64le() {
  std::uint64_t bits = u64le();
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

void ByteReader::bytes(void* dst, std::size_t n) {
  if (pos_ + n > size_) throw DecodeError("truncated: bytes");
  std::memcpy(dst, data_ + pos_, n);
  pos_ += n;
}

std::vector<std::uint8_t> ByteReader::take(std::size_t n) {
  if (pos_ + n > size_) throw DecodeError("truncated: take");
  std::vector<std::uint8_t> out(data_ + pos_, data_ + pos_ + n);
  pos_ += n;
  return out;
}

void ByteReader::expect_done() const {
  if (pos_ != size_) throw DecodeError("trailing bytes after container");
}

std::array<std::uint8_t, 32> sha256(const void* data, std::size_t size) {
  std::array<std::uint8_t, 32> out{};
  SHA256(static_cast<const unsigned char*>(data), size, out.data());
  return out;
}

void atomic_write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for write: " + tmp);
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    f.flush();
    if (!f) throw IoError("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw IoError("rename failed: " + path);
}

void atomic_write_file(const std::string& path, const std::string& text) {
  std::vector<std::uint8_t> b(text.begin(), text.end());
  atomic_write_file(path, b);
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary | std::ios::ate);
  if (!f) throw IoError("cannot open: " + path);
  auto size = f.tellg();
  f.seekg(0);
  std::vector<std::uint8_t> out(static_cast<std::size_t>(size));
  f.read(reinterpret_cast<char*>(out.data()), size);
  if (!f) throw IoError("read failed: " + path);
  return out;
}

std::string read_text_file(const std::string& path) {
  auto b = read_file(path);
  return std::string(b.begin(), b.end());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned threads) {
  if (n == 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  unsigned count = threads ? threads : (hw ? hw : 1);
  if (count > n) count = static_cast<unsigned>(n);
  if (count <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mu;
  pool.reserve(count);
  for (unsigned w = 0; w < count; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace hb
