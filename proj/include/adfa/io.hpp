// Copyright (c) 2026 The ADFA Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "adfa/audio_buffer.hpp"
#include "adfa/basis.hpp"
#include "adfa/engine.hpp"
#include "adfa/error.hpp"

namespace adfa {

enum class SpecFormat { kBinary, kCsv };

/// Layout of the 'ADFA' container, all integers little-endian:
///
///   offset  size  field
///        0     4  magic "ADFA"
///        4     4  u32 version (1)
///        8     1  u8  method (0 DFA, 1 ADFA, 2 MDFA, 3 CQA)
///        9     1  u8  dtype (0 complex as two f64, 1 real f64)
///       10     2  u16 reserved, 0
///       12     4  u32 n_bins
///       16     4  u32 n_frames (n_cols for matrices)
///       20     8  f64 sample_rate
///       28     4  u32 frame_len
///       32     4  u32 hop
///       36        n_bins f64 center frequencies, then the frame-major payload
namespace format {

inline constexpr std::array<std::uint8_t, 4> kMagic = {'A', 'D', 'F', 'A'};
inline constexpr std::uint32_t kVersion = 1;
inline constexpr std::size_t kHeaderBytes = 36;
inline constexpr std::uint8_t kDtypeComplex = 0;
inline constexpr std::uint8_t kDtypeReal = 1;

struct Header {
  std::uint32_t version = kVersion;
  Method method = Method::kAdfa;
  std::uint8_t dtype = kDtypeComplex;
  std::uint32_t n_bins = 0;
  std::uint32_t n_frames = 0;
  double sample_rate = 0.0;
  std::uint32_t frame_len = 0;
  std::uint32_t hop = 0;
};

}  // namespace format

namespace detail {

class ByteWriter {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u16(std::uint16_t v) { put_le(v, 2); }
  void u32(std::uint32_t v) { put_le(v, 4); }
  void f64(double v) { put_le(std::bit_cast<std::uint64_t>(v), 8); }
  void raw(std::span<const std::uint8_t> s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }

  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }

 private:
  void put_le(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> bytes, std::string context)
      : bytes_(bytes), context_(std::move(context)) {}

  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
  std::size_t position() const noexcept { return pos_; }

  std::uint8_t u8() { return static_cast<std::uint8_t>(get_le(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get_le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get_le(4)); }
  double f64() { return std::bit_cast<double>(get_le(8)); }
  std::span<const std::uint8_t> take(std::size_t n) {
    need(n);
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  void skip(std::size_t n) { take(n); }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) throw Error(ErrorCode::kCorruptFile, context_ + ": unexpected end of data");
  }
  std::uint64_t get_le(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(width);
    return v;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  std::string context_;
};

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kNotFound, path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, path.string() + ": " + std::strerror(errno));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kWriteError, path.string() + ": " + std::strerror(errno));
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::kWriteError, path.string() + ": " + std::strerror(errno));
}

inline void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& data) {
  write_file(path, std::string_view(reinterpret_cast<const char*>(data.data()), data.size()));
}

inline std::uint32_t checked_u32(std::size_t v, const char* what) {
  require(v <= 0xFFFFFFFFu, std::string(what) + " does not fit the 32-bit header field");
  return static_cast<std::uint32_t>(v);
}

inline void write_header(ByteWriter& w, const format::Header& h) {
  w.raw(format::kMagic);
  w.u32(h.version);
  w.u8(static_cast<std::uint8_t>(h.method));
  w.u8(h.dtype);
  w.u16(0);
  w.u32(h.n_bins);
  w.u32(h.n_frames);
  w.f64(h.sample_rate);
  w.u32(h.frame_len);
  w.u32(h.hop);
}

inline format::Header read_header(ByteReader& r, const std::string& name) {
  if (r.remaining() < format::kMagic.size()) {
    throw Error(ErrorCode::kNotAdfaFile, name + ": file too short for magic");
  }
  const auto magic = r.take(format::kMagic.size());
  if (!std::equal(magic.begin(), magic.end(), format::kMagic.begin())) {
    throw Error(ErrorCode::kNotAdfaFile, name + ": bad magic");
  }
  format::Header h;
  h.version = r.u32();
  if (h.version > format::kVersion || h.version == 0) {
    throw Error(ErrorCode::kUnsupportedVersion, name + ": version " + std::to_string(h.version));
  }
  const std::uint8_t method = r.u8();
  if (method > 3) throw Error(ErrorCode::kCorruptFile, name + ": unknown method code");
  h.method = static_cast<Method>(method);
  h.dtype = r.u8();
  if (h.dtype > format::kDtypeReal) throw Error(ErrorCode::kCorruptFile, name + ": unknown dtype");
  r.u16();
  h.n_bins = r.u32();
  h.n_frames = r.u32();
  h.sample_rate = r.f64();
  h.frame_len = r.u32();
  h.hop = r.u32();
  const std::uint64_t value_bytes = h.dtype == format::kDtypeComplex ? 16 : 8;
  const std::uint64_t expected = 8ull * h.n_bins + value_bytes * h.n_bins * h.n_frames;
  if (r.remaining() != expected) {
    throw Error(ErrorCode::kCorruptFile, name + ": payload is " + std::to_string(r.remaining()) +
                                             " bytes, header implies " + std::to_string(expected));
  }
  return h;
}

template <typename Value>
std::vector<std::uint8_t> encode_spectrogram(const BasicSpectrogram<Value>& s) {
  constexpr bool kComplex = std::is_same_v<Value, std::complex<double>>;
  require(s.data.size() == s.n_bins * s.n_frames, "spectrogram data does not match its shape");
  require(s.center_freqs.size() == s.n_bins, "center_freqs does not match n_bins");
  format::Header h;
  h.method = s.method;
  h.dtype = kComplex ? format::kDtypeComplex : format::kDtypeReal;
  h.n_bins = checked_u32(s.n_bins, "n_bins");
  h.n_frames = checked_u32(s.n_frames, "n_frames");
  h.sample_rate = s.sample_rate;
  h.frame_len = s.frame_len;
  h.hop = s.hop;

  ByteWriter w;
  write_header(w, h);
  for (double f : s.center_freqs) w.f64(f);
  for (const Value& v : s.data) {
    if constexpr (kComplex) {
      w.f64(v.real());
      w.f64(v.imag());
    } else {
      w.f64(v);
    }
  }
  return w.bytes();
}

inline void append_number(std::string& out, double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), res.ptr);
}

template <typename Value>
std::string encode_spectrogram_csv(const BasicSpectrogram<Value>& s) {
  constexpr bool kComplex = std::is_same_v<Value, std::complex<double>>;
  std::string out = kComplex ? "bin,frame,re,im\n" : "bin,frame,value\n";
  for (std::size_t k = 0; k < s.n_frames; ++k) {
    for (std::size_t r = 0; r < s.n_bins; ++r) {
      out += std::to_string(r);
      out += ',';
      out += std::to_string(k);
      out += ',';
      if constexpr (kComplex) {
        append_number(out, s.at(r, k).real());
        out += ',';
        append_number(out, s.at(r, k).imag());
      } else {
        append_number(out, s.at(r, k));
      }
      out += '\n';
    }
  }
  return out;
}

template <typename Value>
void write_spectrogram_impl(const BasicSpectrogram<Value>& s, const std::filesystem::path& path,
                            SpecFormat format) {
  if (format == SpecFormat::kBinary) {
    write_file(path, encode_spectrogram(s));
  } else {
    write_file(path, encode_spectrogram_csv(s));
  }
}

}  // namespace detail

inline void write_spectrogram(const Spectrogram& s, const std::filesystem::path& path,
                              SpecFormat format = SpecFormat::kBinary) {
  detail::write_spectrogram_impl(s, path, format);
}

inline void write_spectrogram(const LogPowerSpectrogram& s, const std::filesystem::path& path,
                              SpecFormat format = SpecFormat::kBinary) {
  detail::write_spectrogram_impl(s, path, format);
}

using AnySpectrogram = std::variant<Spectrogram, LogPowerSpectrogram>;

inline AnySpectrogram read_spectrogram(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = detail::read_file(path);
  const std::string name = path.string();
  detail::ByteReader r(bytes, name);
  const format::Header h = detail::read_header(r, name);

  const auto fill = [&](auto& s) {
    s.method = h.method;
    s.n_bins = h.n_bins;
    s.n_frames = h.n_frames;
    s.sample_rate = h.sample_rate;
    s.frame_len = h.frame_len;
    s.hop = h.hop;
    s.center_freqs.resize(h.n_bins);
    for (double& f : s.center_freqs) f = r.f64();
    s.data.resize(static_cast<std::size_t>(h.n_bins) * h.n_frames);
  };

  if (h.dtype == format::kDtypeComplex) {
    Spectrogram s;
    fill(s);
    for (auto& v : s.data) {
      const double re = r.f64();
      const double im = r.f64();
      v = {re, im};
    }
    return s;
  }
  LogPowerSpectrogram s;
  fill(s);
  for (auto& v : s.data) v = r.f64();
  return s;
}

/// Matrices reuse the container: dtype 0, n_frames = n_cols, frame_len =
/// n_cols, hop = 0, sample_rate = 0, payload column by column.
inline void write_matrix(const AnalysisMatrix& m, const std::filesystem::path& path,
                         SpecFormat format = SpecFormat::kBinary) {
  if (format == SpecFormat::kCsv) {
    std::string out = "row,col,re,im\n";
    for (std::size_t r = 0; r < m.n_bins(); ++r) {
      for (std::size_t c = 0; c < m.n_cols(); ++c) {
        out += std::to_string(r) + ',' + std::to_string(c) + ',';
        detail::append_number(out, m(r, c).real());
        out += ',';
        detail::append_number(out, m(r, c).imag());
        out += '\n';
      }
    }
    detail::write_file(path, out);
    return;
  }
  format::Header h;
  h.method = m.method();
  h.dtype = format::kDtypeComplex;
  h.n_bins = detail::checked_u32(m.n_bins(), "n_bins");
  h.n_frames = detail::checked_u32(m.n_cols(), "n_cols");
  h.frame_len = h.n_frames;
  detail::ByteWriter w;
  detail::write_header(w, h);
  for (double f : m.center_freqs()) w.f64(f);
  for (std::size_t c = 0; c < m.n_cols(); ++c) {
    for (std::size_t r = 0; r < m.n_bins(); ++r) {
      w.f64(m(r, c).real());
      w.f64(m(r, c).imag());
    }
  }
  detail::write_file(path, w.bytes());
}

/// Normalization is not stored; it is recovered from |entry(0, 0)|.
inline AnalysisMatrix read_matrix(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = detail::read_file(path);
  const std::string name = path.string();
  detail::ByteReader r(bytes, name);
  const format::Header h = detail::read_header(r, name);
  if (h.dtype != format::kDtypeComplex || h.n_bins == 0 || h.n_frames == 0) {
    throw Error(ErrorCode::kCorruptFile, name + ": not a matrix payload");
  }
  const std::size_t rows = h.n_bins;
  const std::size_t cols = h.n_frames;
  std::vector<double> freqs(rows);
  for (double& f : freqs) f = r.f64();
  std::vector<std::complex<double>> entries(rows * cols);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t row = 0; row < rows; ++row) {
      const double re = r.f64();
      const double im = r.f64();
      entries[row * cols + c] = {re, im};
    }
  }
  const double corner = std::abs(entries.front());
  const Normalization norm = std::abs(corner - 1.0) < 1e-9 ? Normalization::kNone
                                                           : Normalization::kInvSqrtCols;
  return AnalysisMatrix(h.method, norm, rows, cols, std::move(entries), std::move(freqs));
}

// ---------------------------------------------------------------------------
// RIFF/WAVE, 16-bit integer PCM only.

namespace detail {

inline constexpr std::uint16_t kWaveFormatPcm = 0x0001;
inline constexpr std::uint16_t kWaveFormatExtensible = 0xFFFE;

inline bool fourcc_is(std::span<const std::uint8_t> id, const char* tag) {
  return std::memcmp(id.data(), tag, 4) == 0;
}

}  // namespace detail

/// Reads a PCM16 WAV file. Channels are mixed down by their arithmetic mean;
/// samples are scaled by 1/32768.
inline AudioBuffer read_wav(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = detail::read_file(path);
  const std::string name = path.string();
  detail::ByteReader r(bytes, name);

  if (bytes.size() < 12) throw Error(ErrorCode::kCorruptFile, name + ": too short for a RIFF header");
  const auto riff = r.take(4);
  r.u32();
  const auto wave = r.take(4);
  if (!detail::fourcc_is(riff, "RIFF") || !detail::fourcc_is(wave, "WAVE")) {
    throw Error(ErrorCode::kUnsupportedFormat, name + ": not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t bits = 0;
  while (r.remaining() >= 8) {
    const auto id = r.take(4);
    const std::uint32_t size = r.u32();
    if (size > r.remaining()) {
      throw Error(ErrorCode::kCorruptFile, name + ": chunk '" +
                                               std::string(id.begin(), id.end()) +
                                               "' is truncated");
    }
    if (detail::fourcc_is(id, "fmt ")) {
      if (size < 16) throw Error(ErrorCode::kCorruptFile, name + ": fmt chunk too small");
      detail::ByteReader fmt(r.take(size), name);
      std::uint16_t tag = fmt.u16();
      channels = fmt.u16();
      rate = fmt.u32();
      fmt.u32();  // byte rate
      fmt.u16();  // block align
      bits = fmt.u16();
      if (tag == detail::kWaveFormatExtensible && size >= 40) {
        fmt.skip(8);  // cbSize, valid bits, channel mask
        tag = fmt.u16();  // first two bytes of the sub-format GUID
      }
      if (tag != detail::kWaveFormatPcm) {
        throw Error(ErrorCode::kUnsupportedFormat, name + ": format code " + std::to_string(tag) +
                                                       " is not integer PCM");
      }
      if (bits != 16) {
        throw Error(ErrorCode::kUnsupportedFormat,
                    name + ": " + std::to_string(bits) + "-bit PCM (format code 1) is not supported");
      }
      if (channels == 0 || rate == 0) {
        throw Error(ErrorCode::kCorruptFile, name + ": zero channels or sample rate");
      }
      have_fmt = true;
    } else if (detail::fourcc_is(id, "data")) {
      if (!have_fmt) throw Error(ErrorCode::kCorruptFile, name + ": data chunk before fmt chunk");
      const std::size_t block = 2u * channels;
      if (size % block != 0) {
        throw Error(ErrorCode::kCorruptFile, name + ": data chunk ends mid-frame");
      }
      detail::ByteReader data(r.take(size), name);
      AudioBuffer out;
      out.sample_rate = rate;
      out.samples.resize(size / block);
      for (double& s : out.samples) {
        double sum = 0.0;
        for (std::uint16_t c = 0; c < channels; ++c) {
          sum += static_cast<double>(static_cast<std::int16_t>(data.u16())) / 32768.0;
        }
        s = sum / channels;
      }
      return out;
    } else {
      r.skip(size);
    }
    if (size % 2 == 1 && r.remaining() > 0) r.skip(1);
  }
  throw Error(ErrorCode::kCorruptFile, name + (have_fmt ? ": no data chunk" : ": no fmt chunk"));
}

/// Writes mono PCM16, rounding x * 32768 and clamping to the int16 range.
inline void write_wav(const AudioBuffer& audio, const std::filesystem::path& path) {
  detail::require(audio.sample_rate > 0, "sample rate must be positive");
  const std::uint32_t data_bytes = detail::checked_u32(audio.samples.size() * 2, "data size");
  detail::ByteWriter w;
  w.raw(std::array<std::uint8_t, 4>{'R', 'I', 'F', 'F'});
  w.u32(36 + data_bytes);
  w.raw(std::array<std::uint8_t, 4>{'W', 'A', 'V', 'E'});
  w.raw(std::array<std::uint8_t, 4>{'f', 'm', 't', ' '});
  w.u32(16);
  w.u16(detail::kWaveFormatPcm);
  w.u16(1);
  w.u32(audio.sample_rate);
  w.u32(audio.sample_rate * 2);
  w.u16(2);
  w.u16(16);
  w.raw(std::array<std::uint8_t, 4>{'d', 'a', 't', 'a'});
  w.u32(data_bytes);
  for (double x : audio.samples) {
    const double q = std::clamp(std::round(x * 32768.0), -32768.0, 32767.0);
    w.u16(static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  detail::write_file(path, w.bytes());
}

}  // namespace adfa
