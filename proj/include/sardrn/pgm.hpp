/* Copyright (c) 2026 The sardrn Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#pragma once

// Binary PGM (P5) I/O, 8- or 16-bit grayscale. Pixels map linearly to [0,1]
// on load (divide by maxval); on save they are clamped to [0,1], scaled to
// maxval and rounded half away from zero. 16-bit samples are big-endian per
// the PNM convention.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "sardrn/errors.hpp"
#include "sardrn/image.hpp"

namespace sardrn {

namespace detail {

inline std::vector<unsigned char> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return bytes;
}

inline bool pgm_is_space(unsigned char ch) {
  return ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n';
}

// Whitespace and '#'-to-end-of-line comments between header tokens.
inline void pgm_skip_separators(const std::vector<unsigned char>& bytes,
                                std::size_t& pos) {
  while (pos < bytes.size()) {
    if (pgm_is_space(bytes[pos])) {
      ++pos;
    } else if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
}

inline long pgm_read_int(const std::vector<unsigned char>& bytes,
                         std::size_t& pos, const char* what) {
  pgm_skip_separators(bytes, pos);
  if (pos >= bytes.size() || bytes[pos] < '0' || bytes[pos] > '9') {
    throw ParseError(std::string("pgm: expected ") + what, pos);
  }
  long value = 0;
  while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
    value = value * 10 + (bytes[pos] - '0');
    if (value > 1000000000L) {
      throw ParseError(std::string("pgm: ") + what + " out of range", pos);
    }
    ++pos;
  }
  return value;
}

}  // namespace detail

inline ImageF load_image(const std::string& path) {
  const auto bytes = detail::read_file_bytes(path);
  std::size_t pos = 0;
  if (bytes.size() < 2 || bytes[0] != 'P') {
    throw ParseError("pgm: not a PNM file (missing 'P' magic)", 0);
  }
  if (bytes[1] != '5') {
    throw ParseError(std::string("pgm: unsupported magic 'P") +
                         static_cast<char>(bytes[1]) +
                         "', only binary grayscale 'P5' is supported",
                     0);
  }
  pos = 2;
  const long width = detail::pgm_read_int(bytes, pos, "width");
  const long height = detail::pgm_read_int(bytes, pos, "height");
  const long maxval = detail::pgm_read_int(bytes, pos, "maxval");
  if (width < 1) throw ParseError("pgm: width must be >= 1", pos);
  if (height < 1) throw ParseError("pgm: height must be >= 1", pos);
  if (maxval < 1 || maxval > 65535) {
    throw ParseError("pgm: unsupported maxval " + std::to_string(maxval), pos);
  }
  if (pos >= bytes.size() || !detail::pgm_is_space(bytes[pos])) {
    throw ParseError("pgm: expected single whitespace before pixel data", pos);
  }
  ++pos;

  const int bytes_per_sample = maxval < 256 ? 1 : 2;
  const std::size_t expected = static_cast<std::size_t>(width) *
                               static_cast<std::size_t>(height) *
                               static_cast<std::size_t>(bytes_per_sample);
  if (bytes.size() - pos < expected) {
    throw ParseError("pgm: truncated pixel payload, need " +
                         std::to_string(expected) + " bytes, have " +
                         std::to_string(bytes.size() - pos),
                     pos);
  }

  ImageF img(static_cast<int>(height), static_cast<int>(width));
  // direct division so stored values reproduce k/maxval bit-exactly
  const double denom = static_cast<double>(maxval);
  if (bytes_per_sample == 1) {
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
      img.pixels[i] = static_cast<double>(bytes[pos + i]) / denom;
    }
  } else {
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
      const unsigned hi = bytes[pos + 2 * i];
      const unsigned lo = bytes[pos + 2 * i + 1];
      img.pixels[i] = static_cast<double>((hi << 8) | lo) / denom;
    }
  }
  return img;
}

inline void save_image(const ImageF& img, const std::string& path,
                       int maxval = 255) {
  require_nonempty(img, "save_image");
  if (maxval < 1 || maxval > 65535) {
    throw ArgumentError("save_image: maxval must be in [1, 65535]");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << "P5\n" << img.width << ' ' << img.height << '\n' << maxval << '\n';
  const bool wide = maxval >= 256;
  std::vector<unsigned char> payload;
  payload.reserve(img.pixels.size() * (wide ? 2 : 1));
  for (double v : img.pixels) {
    const double clamped = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    long q = std::llround(clamped * static_cast<double>(maxval));
    if (q < 0) q = 0;
    if (q > maxval) q = maxval;
    if (wide) {
      payload.push_back(static_cast<unsigned char>((q >> 8) & 0xFF));
      payload.push_back(static_cast<unsigned char>(q & 0xFF));
    } else {
      payload.push_back(static_cast<unsigned char>(q));
    }
  }
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace sardrn
