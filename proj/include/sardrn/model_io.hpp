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

// Binary model file, fixed little-endian layout (portable across machines):
//
//   bytes 0..3   magic "SDRN"
//   u16          format version (currently 1)
//   u16          layer count
//   per layer    u32 out_ch, u32 in_ch, u16 kernel, u16 dilation, u16 pad,
//                u8 activation (0 = none, 1 = relu)
//   per layer    weights then biases, 32-bit IEEE floats
//   u32          CRC-32 of all preceding bytes
//
// Weights are held in doubles in memory and stored as floats; a
// save -> load -> save round trip is byte-identical. Skip topology is not
// part of the file; callers supply it at load time (the standard
// {(1,3),(4,7)} wiring by default).

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <zlib.h>

#include "sardrn/errors.hpp"
#include "sardrn/network.hpp"

namespace sardrn {

inline constexpr char kModelMagic[4] = {'S', 'D', 'R', 'N'};
inline constexpr std::uint16_t kModelFormatVersion = 1;

namespace detail {

inline void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
}

inline void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
  }
}

inline void put_f32(std::vector<unsigned char>& out, double v) {
  put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
}

class ByteReader {
 public:
  ByteReader(const unsigned char* data, std::size_t size)
      : data_(data), size_(size) {}

  std::size_t pos() const { return pos_; }

  unsigned char u8(const char* what) {
    need(1, what);
    return data_[pos_++];
  }

  std::uint16_t u16(const char* what) {
    need(2, what);
    const std::uint16_t v = static_cast<std::uint16_t>(
        data_[pos_] | (static_cast<std::uint16_t>(data_[pos_ + 1]) << 8));
    pos_ += 2;
    return v;
  }

  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
    }
    pos_ += 4;
    return v;
  }

  double f32(const char* what) {
    return static_cast<double>(std::bit_cast<float>(u32(what)));
  }

  std::size_t remaining() const { return size_ - pos_; }

 private:
  void need(std::size_t count, const char* what) {
    if (size_ - pos_ < count) {
      throw ModelFormatError(std::string("model file truncated reading ") +
                             what + " at byte " + std::to_string(pos_));
    }
  }

  const unsigned char* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

inline std::uint32_t crc32_of(const unsigned char* data, std::size_t size) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, data, static_cast<uInt>(size)));
}

}  // namespace detail

inline std::vector<unsigned char> serialize_model(const Network& net) {
  std::vector<unsigned char> out;
  out.insert(out.end(), kModelMagic, kModelMagic + 4);
  detail::put_u16(out, kModelFormatVersion);
  if (net.params.size() > 0xFFFF) {
    throw ArgumentError("serialize_model: too many layers");
  }
  detail::put_u16(out, static_cast<std::uint16_t>(net.params.size()));
  for (std::size_t l = 0; l < net.params.size(); ++l) {
    const auto& p = net.params[l];
    detail::put_u32(out, static_cast<std::uint32_t>(p.out_channels));
    detail::put_u32(out, static_cast<std::uint32_t>(p.in_channels));
    detail::put_u16(out, static_cast<std::uint16_t>(p.kernel));
    detail::put_u16(out, static_cast<std::uint16_t>(p.dilation));
    detail::put_u16(out, static_cast<std::uint16_t>(p.pad));
    out.push_back(static_cast<unsigned char>(
        net.spec.layers[l].activation == Activation::kRelu ? 1 : 0));
  }
  for (const auto& p : net.params) {
    for (double w : p.weights) detail::put_f32(out, w);
    for (double b : p.bias) detail::put_f32(out, b);
  }
  detail::put_u32(out, detail::crc32_of(out.data(), out.size()));
  return out;
}

inline void save_model(const Network& net, const std::string& path) {
  const auto bytes = serialize_model(net);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path);
}

inline Network deserialize_model(
    const std::vector<unsigned char>& bytes,
    const std::vector<std::pair<int, int>>& skips) {
  if (bytes.size() < 12) {
    throw ModelFormatError("model file too short (" +
                           std::to_string(bytes.size()) + " bytes)");
  }
  // integrity first: a truncated or corrupted file must never yield a
  // partial network
  const std::uint32_t stored_crc =
      static_cast<std::uint32_t>(bytes[bytes.size() - 4]) |
      (static_cast<std::uint32_t>(bytes[bytes.size() - 3]) << 8) |
      (static_cast<std::uint32_t>(bytes[bytes.size() - 2]) << 16) |
      (static_cast<std::uint32_t>(bytes[bytes.size() - 1]) << 24);
  const std::uint32_t actual_crc =
      detail::crc32_of(bytes.data(), bytes.size() - 4);
  if (stored_crc != actual_crc) {
    throw ModelCrcError("model file CRC mismatch");
  }

  detail::ByteReader reader(bytes.data(), bytes.size() - 4);
  if (std::memcmp(bytes.data(), kModelMagic, 4) != 0) {
    throw ModelFormatError("model file has wrong magic, expected \"SDRN\"");
  }
  reader.u32("magic");
  const std::uint16_t version = reader.u16("version");
  if (version != kModelFormatVersion) {
    throw ModelVersionError("unrecognized model format version " +
                            std::to_string(version));
  }
  const std::uint16_t layer_count = reader.u16("layer count");
  if (layer_count == 0) throw ModelFormatError("model file has zero layers");

  Network net;
  net.spec.skips = skips;
  std::size_t expected_floats = 0;
  for (int l = 0; l < layer_count; ++l) {
    const auto out_ch = reader.u32("out_channels");
    const auto in_ch = reader.u32("in_channels");
    const auto kernel = reader.u16("kernel");
    const auto dilation = reader.u16("dilation");
    const auto pad = reader.u16("pad");
    const auto act = reader.u8("activation");
    if (out_ch < 1 || in_ch < 1 || kernel < 1 || dilation < 1) {
      throw ModelFormatError("model layer " + std::to_string(l + 1) +
                             " header has zero fields");
    }
    if (act > 1) {
      throw ModelFormatError("model layer " + std::to_string(l + 1) +
                             " has unknown activation code " +
                             std::to_string(act));
    }
    LayerSpec layer;
    layer.out_channels = static_cast<int>(out_ch);
    layer.kernel = kernel;
    layer.dilation = dilation;
    layer.pad = pad;
    layer.activation = act == 1 ? Activation::kRelu : Activation::kNone;
    net.spec.layers.push_back(layer);
    net.params.emplace_back(static_cast<int>(out_ch), static_cast<int>(in_ch),
                            kernel, dilation, pad);
    expected_floats += net.params.back().weights.size() +
                       net.params.back().bias.size();
  }
  for (int l = 1; l < layer_count; ++l) {
    if (net.params[static_cast<std::size_t>(l)].in_channels !=
        net.params[static_cast<std::size_t>(l - 1)].out_channels) {
      throw ShapeError("model layer " + std::to_string(l + 1) +
                       ": channel axis does not chain from layer " +
                       std::to_string(l));
    }
  }
  if (reader.remaining() != expected_floats * 4) {
    throw ModelFormatError(
        "model payload size mismatch: headers imply " +
        std::to_string(expected_floats * 4) + " bytes of floats, found " +
        std::to_string(reader.remaining()));
  }
  for (auto& p : net.params) {
    for (double& w : p.weights) w = reader.f32("weight");
    for (double& b : p.bias) b = reader.f32("bias");
  }
  validate_spec(net.spec);
  return net;
}

inline Network load_model(const std::string& path,
                          const std::vector<std::pair<int, int>>& skips =
                              NetworkSpec::default_skips()) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return deserialize_model(bytes, skips);
}

}  // namespace sardrn
