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

// Framed binary protocol shared by both daemons.
//
// Frame layout:
//
//   offset  size  field
//   0       1     version (1)
//   1       1     message type
//   2       4     payload length, big-endian, at most 64 KiB
//   6       n     payload
//
// Payloads by type:
//
//   1 OprfRequest        u8 n (1..8) || n x 32-byte blinded elements
//   2 OprfResponse       n x 32-byte evaluated elements || 64-byte proof
//   3 Submit             one Submission (client_encode.h)
//   4 SubmitLayered      one SuperSubmission (multidim.h)
//   5 Ack                u32 count (submissions accepted, or decoded on seal)
//   6 Seal               empty
//   7 PublicKeyRequest   empty
//   8 PublicKeyResponse  32-byte public key
//   127 Error            u8 absl::StatusCode || UTF-8 message

#ifndef NEBULA_WIRE_H_
#define NEBULA_WIRE_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "nebula/group.h"
#include "nebula/oprf.h"

namespace nebula {

inline constexpr uint8_t kWireVersion = 1;
inline constexpr size_t kFrameHeaderSize = 6;
inline constexpr size_t kMaxFramePayload = 64 * 1024;

enum class MessageType : uint8_t {
  kOprfRequest = 1,
  kOprfResponse = 2,
  kSubmit = 3,
  kSubmitLayered = 4,
  kAck = 5,
  kSeal = 6,
  kPublicKeyRequest = 7,
  kPublicKeyResponse = 8,
  kError = 0x7f,
};

bool IsKnownMessageType(uint8_t type);

struct Frame {
  MessageType type;
  std::string payload;

  std::string Encode() const;
  void AppendTo(std::string& out) const;

  friend bool operator==(const Frame&, const Frame&) = default;
};

struct FrameHeader {
  uint8_t version = 0;
  uint8_t type = 0;
  uint32_t length = 0;
};

// Parses the fixed header without judging it.
FrameHeader ParseFrameHeader(const char* bytes);
// Version, type and length checks, applied before any payload is read.
absl::Status ValidateFrameHeader(const FrameHeader& header,
                                 size_t max_payload = kMaxFramePayload);

// Exactly one frame.
absl::StatusOr<Frame> DecodeFrame(std::string_view bytes);

std::string EncodeOprfRequest(absl::Span<const GroupElement> blinded);
absl::StatusOr<std::vector<GroupElement>> DecodeOprfRequest(
    std::string_view payload);

std::string EncodeOprfResponse(const Evaluation& evaluation);
absl::StatusOr<Evaluation> DecodeOprfResponse(std::string_view payload);

std::string EncodeAck(uint32_t count);
absl::StatusOr<uint32_t> DecodeAck(std::string_view payload);

Frame ErrorFrame(const absl::Status& status);
// The status carried by an error frame; OK for malformed error payloads is
// never returned.
absl::Status DecodeError(std::string_view payload);

}  // namespace nebula

#endif  // NEBULA_WIRE_H_
