// Copyright 2026 The Nebula Authors
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

#ifndef NEBULA_BYTES_H_
#define NEBULA_BYTES_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace nebula {

// Fixed 32-byte value: tags, seeds, keys, OPRF outputs.
using Bytes32 = std::array<uint8_t, 32>;

inline std::string_view AsStringView(const Bytes32& b) {
  return std::string_view(reinterpret_cast<const char*>(b.data()), b.size());
}

inline std::string ToString(const Bytes32& b) {
  return std::string(AsStringView(b));
}

// Copies exactly 32 bytes; the caller guarantees the length.
inline Bytes32 ToBytes32(std::string_view s) {
  Bytes32 out{};
  std::memcpy(out.data(), s.data(), out.size());
  return out;
}

// Tags and OPRF outputs are uniformly distributed, so the leading bytes
// already make a good hash.
struct Bytes32Hash {
  size_t operator()(const Bytes32& b) const {
    size_t h;
    std::memcpy(&h, b.data(), sizeof(h));
    return h;
  }
};

// Appends big-endian integers and raw bytes to a std::string buffer.
class ByteWriter {
 public:
  ByteWriter() = default;
  explicit ByteWriter(size_t reserve) { out_.reserve(reserve); }

  void PutU8(uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void PutU16(uint16_t v) {
    PutU8(static_cast<uint8_t>(v >> 8));
    PutU8(static_cast<uint8_t>(v));
  }
  void PutU32(uint32_t v) {
    PutU16(static_cast<uint16_t>(v >> 16));
    PutU16(static_cast<uint16_t>(v));
  }
  void PutBytes(std::string_view b) { out_.append(b); }
  void PutBytes(const Bytes32& b) { out_.append(AsStringView(b)); }

  size_t size() const { return out_.size(); }
  std::string Release() { return std::move(out_); }

 private:
  std::string out_;
};

// Cursor over an immutable byte buffer. Every read checks bounds.
class ByteReader {
 public:
  explicit ByteReader(std::string_view in) : in_(in) {}

  absl::StatusOr<uint8_t> ReadU8() {
    if (in_.size() < 1) return Truncated("u8");
    uint8_t v = static_cast<uint8_t>(in_[0]);
    in_.remove_prefix(1);
    return v;
  }
  absl::StatusOr<uint16_t> ReadU16() {
    if (in_.size() < 2) return Truncated("u16");
    uint16_t v = static_cast<uint16_t>(
        (static_cast<uint8_t>(in_[0]) << 8) | static_cast<uint8_t>(in_[1]));
    in_.remove_prefix(2);
    return v;
  }
  absl::StatusOr<uint32_t> ReadU32() {
    if (in_.size() < 4) return Truncated("u32");
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | static_cast<uint8_t>(in_[i]);
    in_.remove_prefix(4);
    return v;
  }
  absl::StatusOr<std::string_view> ReadBytes(size_t n) {
    if (in_.size() < n) return Truncated("byte string");
    std::string_view v = in_.substr(0, n);
    in_.remove_prefix(n);
    return v;
  }
  absl::StatusOr<Bytes32> ReadBytes32() {
    if (in_.size() < 32) return Truncated("32-byte field");
    Bytes32 v = ToBytes32(in_);
    in_.remove_prefix(32);
    return v;
  }

  size_t remaining() const { return in_.size(); }
  bool empty() const { return in_.empty(); }

 private:
  static absl::Status Truncated(std::string_view what) {
    return absl::InvalidArgumentError(
        std::string("truncated input while reading ") + std::string(what));
  }

  std::string_view in_;
};

}  // namespace nebula

#endif  // NEBULA_BYTES_H_
