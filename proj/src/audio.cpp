// src/audio.cpp

// Copyright 2026  speechaug authors

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

#include "speechaug/audio.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "speechaug/error.hpp"

namespace speechaug {

namespace {

std::uint32_t read_u32le(const unsigned char *p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16le(const unsigned char *p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32le(std::vector<unsigned char> &v, std::uint32_t x) {
  v.push_back(x & 0xFF);
  v.push_back((x >> 8) & 0xFF);
  v.push_back((x >> 16) & 0xFF);
  v.push_back((x >> 24) & 0xFF);
}

void put_u16le(std::vector<unsigned char> &v, std::uint16_t x) {
  v.push_back(x & 0xFF);
  v.push_back((x >> 8) & 0xFF);
}

}  // namespace

AudioBuffer read_wav(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw MalformedWav("not a RIFF/WAVE file: " + path.string());

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char *data = nullptr;
  std::uint32_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char *hdr = bytes.data() + pos;
    std::uint32_t chunk_size = read_u32le(hdr + 4);
    std::size_t body = pos + 8;
    if (body + chunk_size > bytes.size())
      throw MalformedWav("truncated chunk in " + path.string());
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw MalformedWav("short fmt chunk");
      format = read_u16le(bytes.data() + body);
      channels = read_u16le(bytes.data() + body + 2);
      rate = read_u32le(bytes.data() + body + 4);
      bits = read_u16le(bytes.data() + body + 14);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = chunk_size;
    }
    pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }
  if (!have_fmt || data == nullptr)
    throw MalformedWav("missing fmt or data chunk: " + path.string());
  if (format != 1) throw UnsupportedFormat("non-PCM format code " + std::to_string(format));
  if (bits != 16) throw UnsupportedFormat("bit depth " + std::to_string(bits) + ", want 16");
  if (channels != 1) throw UnsupportedFormat(std::to_string(channels) + " channels, want mono");
  if (rate == 0) throw MalformedWav("zero sample rate");

  AudioBuffer buf;
  buf.sample_rate = static_cast<int>(rate);
  Eigen::Index n = data_size / 2;
  buf.samples.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::int16_t s = static_cast<std::int16_t>(read_u16le(data + 2 * i));
    buf.samples[i] = static_cast<double>(s) / 32768.0;
  }
  return buf;
}

void write_wav(const AudioBuffer &buffer, const std::filesystem::path &path) {
  if (buffer.samples.size() == 0) throw EmptyBuffer("refusing to write empty buffer");
  const std::uint32_t n = static_cast<std::uint32_t>(buffer.samples.size());
  const std::uint32_t data_size = n * 2;
  const std::uint32_t rate = static_cast<std::uint32_t>(buffer.sample_rate);

  std::vector<unsigned char> out;
  out.reserve(44 + data_size);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32le(out, 36 + data_size);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  put_u32le(out, 16);
  put_u16le(out, 1);  // PCM
  put_u16le(out, 1);  // mono
  put_u32le(out, rate);
  put_u32le(out, rate * 2);  // byte rate
  put_u16le(out, 2);         // block align
  put_u16le(out, 16);        // bits
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32le(out, data_size);
  for (Eigen::Index i = 0; i < buffer.samples.size(); ++i) {
    double q = std::round(buffer.samples[i] * 32767.0);
    if (q > 32767.0) q = 32767.0;
    if (q < -32768.0) q = -32768.0;
    put_u16le(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for write: " + path.string());
  f.write(reinterpret_cast<const char *>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failed: " + path.string());
}

}  // namespace speechaug
