// src/waveform.cc

// Copyright 2026  dysaug authors

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

#include "dysaug/waveform.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace dysaug::signal {

namespace {

uint32_t read_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string& s, uint32_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
  s.push_back(static_cast<char>((v >> 16) & 0xff));
  s.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u16(std::string& s, uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

Waveform wav_read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WavError(WavError::Kind::kIo, "cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());

  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw WavError(WavError::Kind::kMalformedHeader,
                   path + ": missing RIFF/WAVE header");

  bool have_fmt = false;
  uint16_t channels = 0, bits = 0, audio_format = 0;
  uint32_t sample_rate = 0;
  const unsigned char* data = nullptr;
  uint32_t data_len = 0;
  bool have_data = false;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    uint32_t chunk_len = read_u32(chunk + 4);
    size_t body = pos + 8;
    if (body + chunk_len > bytes.size()) {
      // Tolerate a truncated final data chunk length only if it is the
      // declared chunk that overruns; anything else is malformed.
      throw WavError(WavError::Kind::kMalformedHeader,
                     path + ": chunk overruns file");
    }
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (chunk_len < 16)
        throw WavError(WavError::Kind::kMalformedHeader, path + ": short fmt chunk");
      audio_format = read_u16(chunk + 8);
      channels = read_u16(chunk + 10);
      sample_rate = read_u32(chunk + 12);
      bits = read_u16(chunk + 22);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_len = chunk_len;
      have_data = true;
    }
    pos = body + chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }

  if (!have_fmt || !have_data)
    throw WavError(WavError::Kind::kMalformedHeader,
                   path + ": missing fmt or data chunk");
  if (channels != 1)
    throw WavError(WavError::Kind::kNotMono,
                   path + ": expected mono, got " + std::to_string(channels) +
                       " channels");
  if (audio_format != 1 || bits != 16)
    throw WavError(WavError::Kind::kUnsupportedBitDepth,
                   path + ": only 16-bit PCM supported (format=" +
                       std::to_string(audio_format) + ", bits=" +
                       std::to_string(bits) + ")");
  if (sample_rate == 0)
    throw WavError(WavError::Kind::kMalformedHeader, path + ": zero sample rate");

  Waveform w;
  w.sample_rate = static_cast<int>(sample_rate);
  size_t n = data_len / 2;
  w.samples.resize(n);
  for (size_t i = 0; i < n; ++i) {
    int16_t s = static_cast<int16_t>(data[2 * i] | (data[2 * i + 1] << 8));
    w.samples[i] = static_cast<double>(s) / 32767.0;
  }
  return w;
}

void wav_write(const Waveform& w, const std::string& path) {
  uint32_t data_len = static_cast<uint32_t>(w.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_len);
  out += "RIFF";
  put_u32(out, 36 + data_len);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<uint32_t>(w.sample_rate));
  put_u32(out, static_cast<uint32_t>(w.sample_rate) * 2);  // byte rate
  put_u16(out, 2);                                         // block align
  put_u16(out, 16);                                        // bits
  out += "data";
  put_u32(out, data_len);
  for (double s : w.samples) {
    double clamped = std::clamp(s, -1.0, 1.0);
    int16_t q = static_cast<int16_t>(std::lrint(clamped * 32767.0));
    put_u16(out, static_cast<uint16_t>(q));
  }

  std::ofstream f(path, std::ios::binary);
  if (!f) throw WavError(WavError::Kind::kIo, "cannot write " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw WavError(WavError::Kind::kIo, "short write to " + path);
}

}  // namespace dysaug::signal
