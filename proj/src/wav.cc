// wav.cc

// Copyright 2026 The tdoa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "tdoa/wav.h"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "tdoa/errors.h"

namespace tdoa {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t Le32(const unsigned char *p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t Le16(const unsigned char *p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void Put32(std::ostream &os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<char *>(b), 4);
}
void Put16(std::ostream &os, std::uint16_t v) {
  unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
  os.write(reinterpret_cast<char *>(b), 2);
}

double DecodeSample(const unsigned char *p, std::uint16_t format, int bits) {
  if (format == kFormatFloat) {
    if (bits == 32) {
      std::uint32_t u = Le32(p);
      float f;
      std::memcpy(&f, &u, 4);
      return f;
    }
    std::uint64_t u = Le32(p) | (static_cast<std::uint64_t>(Le32(p + 4)) << 32);
    double d;
    std::memcpy(&d, &u, 8);
    return d;
  }
  switch (bits) {
    case 16:
      return static_cast<std::int16_t>(Le16(p)) / 32768.0;
    case 24: {
      std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    case 32:
      return static_cast<std::int32_t>(Le32(p)) / 2147483648.0;
  }
  throw ConfigError("unsupported PCM bit depth");
}

}  // namespace

WavData ReadWav(std::istream &is) {
  unsigned char hdr[12];
  if (!is.read(reinterpret_cast<char *>(hdr), 12) ||
      std::memcmp(hdr, "RIFF", 4) != 0 || std::memcmp(hdr + 8, "WAVE", 4) != 0)
    throw ConfigError("not a RIFF/WAVE stream");
  std::uint16_t format = 0, num_ch = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::vector<unsigned char> data;
  bool have_data = false;
  unsigned char ch[8];
  while (is.read(reinterpret_cast<char *>(ch), 8)) {
    std::uint32_t size = Le32(ch + 4);
    std::vector<unsigned char> body(size);
    if (size > 0 && !is.read(reinterpret_cast<char *>(body.data()), size))
      throw ConfigError("truncated WAV chunk");
    if (size & 1) is.ignore(1);
    if (std::memcmp(ch, "fmt ", 4) == 0) {
      if (size < 16) throw ConfigError("short fmt chunk");
      format = Le16(&body[0]);
      num_ch = Le16(&body[2]);
      rate = Le32(&body[4]);
      bits = Le16(&body[14]);
      if (format == kFormatExtensible) {
        if (size < 40) throw ConfigError("short extensible fmt chunk");
        format = Le16(&body[24]);
      }
      have_fmt = true;
    } else if (std::memcmp(ch, "data", 4) == 0) {
      data = std::move(body);
      have_data = true;
      break;
    }
  }
  if (!have_fmt || !have_data) throw ConfigError("WAV stream lacks fmt or data");
  if (format != kFormatPcm && format != kFormatFloat)
    throw ConfigError("unsupported WAV sample format");
  if (num_ch == 0 || rate == 0) throw ConfigError("invalid WAV header");
  if (format == kFormatFloat && bits != 32 && bits != 64)
    throw ConfigError("unsupported float bit depth");
  const int bytes = bits / 8;
  const size_t frame_bytes = static_cast<size_t>(bytes) * num_ch;
  const size_t frames = data.size() / frame_bytes;
  WavData wav;
  wav.sample_rate_hz = rate;
  wav.channels.assign(num_ch, std::vector<double>(frames));
  for (size_t n = 0; n < frames; ++n)
    for (int c = 0; c < num_ch; ++c)
      wav.channels[c][n] =
          DecodeSample(&data[n * frame_bytes + static_cast<size_t>(c) * bytes], format, bits);
  return wav;
}

WavData ReadWavFile(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open " + path);
  return ReadWav(is);
}

void WriteWav(std::ostream &os, const WavData &wav) {
  const std::uint16_t num_ch = static_cast<std::uint16_t>(wav.channels.size());
  if (num_ch == 0) throw UsageError("no channels to write");
  const size_t frames = wav.num_samples();
  for (const auto &c : wav.channels)
    if (c.size() != frames) throw UsageError("ragged channels");
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(frames * num_ch * 4);
  const std::uint32_t rate = static_cast<std::uint32_t>(wav.sample_rate_hz);
  os.write("RIFF", 4);
  Put32(os, 36 + data_bytes);
  os.write("WAVEfmt ", 8);
  Put32(os, 16);
  Put16(os, kFormatFloat);
  Put16(os, num_ch);
  Put32(os, rate);
  Put32(os, rate * num_ch * 4);
  Put16(os, static_cast<std::uint16_t>(num_ch * 4));
  Put16(os, 32);
  os.write("data", 4);
  Put32(os, data_bytes);
  for (size_t n = 0; n < frames; ++n) {
    for (int c = 0; c < num_ch; ++c) {
      float f = static_cast<float>(wav.channels[c][n]);
      std::uint32_t u;
      std::memcpy(&u, &f, 4);
      Put32(os, u);
    }
  }
}

void WriteWavFile(const std::string &path, const WavData &wav) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path);
  WriteWav(os, wav);
}

}  // namespace tdoa
