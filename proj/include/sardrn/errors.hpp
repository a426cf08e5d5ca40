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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sardrn {

// Dimension or axis-count violations. Messages name the offending axis.
class ShapeError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid argument values (negative strides, empty lists, ...).
class ArgumentError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameter outside the mathematical domain of an operation (e.g. looks < 1).
class DomainError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite value encountered where a finite one is required.
class NumericError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Constant region handed to a statistic that is unbounded on it.
class DegenerateRegionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input without enough signal for the requested metric (e.g. all-zero rows).
class DegenerateInputError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inconsistent network topology (channel-incompatible skips and the like).
class SpecError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad run configuration (missing paths, dataset smaller than a batch, ...).
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File I/O failure (open/read/write).
class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed file content; carries the byte offset of the defect.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t byte_offset)
      : std::runtime_error(what + " (byte offset " +
                           std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

// Model-file errors, kept distinct so callers can react to each kind.
class ModelFormatError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ModelVersionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ModelCrcError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sardrn
