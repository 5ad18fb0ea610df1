#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <string>

#include "corpuskit/error.hpp"

namespace corpuskit {

struct WavInfo {
  std::uint16_t format_code = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits_per_sample = 0;
  std::uint64_t data_bytes = 0;

  double duration_s() const {
    const double bytes_per_second = static_cast<double>(sample_rate) *
                                    channels * (bits_per_sample / 8.0);
    return bytes_per_second > 0.0 ? static_cast<double>(data_bytes) / bytes_per_second
                                  : 0.0;
  }
};

namespace detail {

inline std::uint32_t read_u32le(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw ParseError("truncated WAV header");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

inline std::uint16_t read_u16le(std::istream& in) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  if (!in) throw ParseError("truncated WAV header");
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

inline std::string read_fourcc(std::istream& in) {
  char b[4];
  in.read(b, 4);
  if (!in) throw ParseError("truncated WAV header");
  return std::string(b, 4);
}

}  // namespace detail

// Walks the RIFF chunk list; requires a PCM fmt chunk and a data chunk.
// Only the header is inspected, sample data is never read.
inline WavInfo probe_wav_info(std::istream& in) {
  if (detail::read_fourcc(in) != "RIFF") throw ParseError("not a RIFF file");
  detail::read_u32le(in);  // riff size, unused
  if (detail::read_fourcc(in) != "WAVE") throw ParseError("not a WAVE file");

  WavInfo info;
  bool have_fmt = false, have_data = false;
  while (!(have_fmt && have_data)) {
    std::string fourcc;
    try {
      fourcc = detail::read_fourcc(in);
    } catch (const ParseError&) {
      break;  // end of chunk list
    }
    const std::uint32_t size = detail::read_u32le(in);
    if (fourcc == "fmt ") {
      if (size < 16) throw ParseError("fmt chunk too small");
      info.format_code = detail::read_u16le(in);
      info.channels = detail::read_u16le(in);
      info.sample_rate = detail::read_u32le(in);
      detail::read_u32le(in);  // byte rate
      detail::read_u16le(in);  // block align
      info.bits_per_sample = detail::read_u16le(in);
      in.seekg(size - 16 + (size & 1), std::ios::cur);
      have_fmt = true;
    } else if (fourcc == "data") {
      info.data_bytes = size;
      have_data = true;
      // No need to seek past the payload; nothing follows that we want.
      if (!have_fmt) in.seekg(size + (size & 1), std::ios::cur);
    } else {
      in.seekg(size + (size & 1), std::ios::cur);
      if (!in) break;
    }
  }
  if (!have_fmt) throw ParseError("missing fmt chunk");
  if (!have_data) throw ParseError("missing data chunk");
  if (info.format_code != 1)
    throw ParseError("unsupported (non-PCM) format code " +
                     std::to_string(info.format_code));
  if (info.channels == 0 || info.sample_rate == 0 || info.bits_per_sample == 0)
    throw ParseError("degenerate fmt chunk");
  if (info.bits_per_sample % 8 != 0)
    throw ParseError("sub-byte sample width unsupported");
  return info;
}

inline WavInfo probe_wav_info(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open WAV file: " + path.string());
  return probe_wav_info(in);
}

// data_bytes / (sample_rate * channels * bytes_per_sample), in seconds.
inline double probe_wav_duration(const std::filesystem::path& path) {
  return probe_wav_info(path).duration_s();
}

}  // namespace corpuskit
