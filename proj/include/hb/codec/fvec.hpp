#pragma once

#include <string>
#include <vector>

#include "hb/codec/template_codec.hpp"

namespace hb::codec {

// Feature-vector file "FVEC": magic, version 0x01, u32 dim, dim x f64 LE.
std::vector<std::uint8_t> fvec_bytes(const std::vector<double>& v);
std::vector<double> parse_fvec(const std::vector<std::uint8_t>& bytes);
void write_fvec(const std::string& path, const std::vector<double>& v);
std::vector<double> read_fvec(const std::string& path);

// Quantized-template file "QTPL": magic, version 0x01, u32 dim, u32 scale,
// dim x i32 LE. The params binding travels separately (profile of the run).
std::vector<std::uint8_t> qtpl_bytes(const QuantizedTemplate& qt);
QuantizedTemplate parse_qtpl(const std::vector<std::uint8_t>& bytes, const rlwe::FheContext& ctx);
void write_qtpl(const std::string& path, const QuantizedTemplate& qt);
QuantizedTemplate read_qtpl(const std::string& path, const rlwe::FheContext& ctx);

}  // namespace hb::codec
