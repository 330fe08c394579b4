// Copyright 2026 The cuedist Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Little-endian byte packing helpers shared by the binary formats.

#ifndef CUEDIST_SRC_BYTE_IO_H_
#define CUEDIST_SRC_BYTE_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "cuedist/error.h"

namespace cuedist::bytes {

class Writer {
 public:
  void U8(uint8_t v) { out_.push_back(v); }
  void U16(uint16_t v) { Unsigned(v, 2); }
  void U32(uint32_t v) { Unsigned(v, 4); }
  void U64(uint64_t v) { Unsigned(v, 8); }
  void F32(float v) { U32(std::bit_cast<uint32_t>(v)); }
  void F64(double v) { U64(std::bit_cast<uint64_t>(v)); }
  void Tag(const char (&tag)[5]) {
    out_.insert(out_.end(), tag, tag + 4);
  }
  void Raw(std::span<const uint8_t> data) {
    out_.insert(out_.end(), data.begin(), data.end());
  }

  std::vector<uint8_t>& data() { return out_; }

 private:
  void Unsigned(uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  std::vector<uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const uint8_t> data) : data_(data) {}

  uint8_t U8() { return static_cast<uint8_t>(Unsigned(1)); }
  uint16_t U16() { return static_cast<uint16_t>(Unsigned(2)); }
  uint32_t U32() { return static_cast<uint32_t>(Unsigned(4)); }
  uint64_t U64() { return Unsigned(8); }
  float F32() { return std::bit_cast<float>(U32()); }
  double F64() { return std::bit_cast<double>(U64()); }
  std::string Tag() {
    Need(4);
    std::string s(reinterpret_cast<const char*>(data_.data() + pos_), 4);
    pos_ += 4;
    return s;
  }
  std::span<const uint8_t> Raw(size_t n) {
    Need(n);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  void Skip(size_t n) { Raw(n); }

  size_t remaining() const { return data_.size() - pos_; }

 private:
  void Need(size_t n) const {
    if (n > remaining()) Fail(ErrorKind::kData, "unexpected end of data");
  }
  uint64_t Unsigned(int n) {
    Need(static_cast<size_t>(n));
    uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<uint64_t>(data_[pos_ + static_cast<size_t>(i)]) << (8 * i);
    }
    pos_ += static_cast<size_t>(n);
    return v;
  }
  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

}  // namespace cuedist::bytes

#endif  // CUEDIST_SRC_BYTE_IO_H_
