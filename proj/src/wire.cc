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

#include "nebula/wire.h"

#include "absl/strings/str_cat.h"
#include "nebula/bytes.h"
#include "nebula/status_macros.h"

namespace nebula {

bool IsKnownMessageType(uint8_t type) {
  return (type >= 1 && type <= 8) || type == 0x7f;
}

void Frame::AppendTo(std::string& out) const {
  out.push_back(static_cast<char>(kWireVersion));
  out.push_back(static_cast<char>(type));
  uint32_t n = static_cast<uint32_t>(payload.size());
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<char>((n >> shift) & 0xff));
  }
  out.append(payload);
}

std::string Frame::Encode() const {
  std::string out;
  out.reserve(kFrameHeaderSize + payload.size());
  AppendTo(out);
  return out;
}

FrameHeader ParseFrameHeader(const char* bytes) {
  FrameHeader h;
  h.version = static_cast<uint8_t>(bytes[0]);
  h.type = static_cast<uint8_t>(bytes[1]);
  for (int i = 2; i < 6; ++i) {
    h.length = (h.length << 8) | static_cast<uint8_t>(bytes[i]);
  }
  return h;
}

absl::Status ValidateFrameHeader(const FrameHeader& header,
                                 size_t max_payload) {
  if (header.version != kWireVersion) {
    return absl::InvalidArgumentError(
        absl::StrCat("unsupported wire version ", header.version));
  }
  if (!IsKnownMessageType(header.type)) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown message type ", header.type));
  }
  if (header.length > max_payload) {
    return absl::ResourceExhaustedError(
        absl::StrCat("frame payload of ", header.length,
                     " bytes exceeds the limit of ", max_payload));
  }
  return absl::OkStatus();
}

absl::StatusOr<Frame> DecodeFrame(std::string_view bytes) {
  if (bytes.size() < kFrameHeaderSize) {
    return absl::InvalidArgumentError("truncated frame header");
  }
  FrameHeader h = ParseFrameHeader(bytes.data());
  NEBULA_RETURN_IF_ERROR(ValidateFrameHeader(h));
  if (bytes.size() != kFrameHeaderSize + h.length) {
    return absl::InvalidArgumentError("frame length mismatch");
  }
  return Frame{static_cast<MessageType>(h.type),
               std::string(bytes.substr(kFrameHeaderSize))};
}

std::string EncodeOprfRequest(absl::Span<const GroupElement> blinded) {
  ByteWriter out(1 + 32 * blinded.size());
  out.PutU8(static_cast<uint8_t>(blinded.size()));
  for (const GroupElement& b : blinded) out.PutBytes(b.bytes());
  return out.Release();
}

absl::StatusOr<std::vector<GroupElement>> DecodeOprfRequest(
    std::string_view payload) {
  ByteReader in(payload);
  NEBULA_ASSIGN_OR_RETURN(uint8_t n, in.ReadU8());
  if (n == 0 || n > kMaxOprfBatchSize) {
    return absl::InvalidArgumentError("OPRF batch size out of range");
  }
  if (in.remaining() != 32u * n) {
    return absl::InvalidArgumentError("OPRF request length mismatch");
  }
  std::vector<GroupElement> out;
  for (int i = 0; i < n; ++i) {
    NEBULA_ASSIGN_OR_RETURN(std::string_view e, in.ReadBytes(32));
    NEBULA_ASSIGN_OR_RETURN(GroupElement g, GroupElement::Decode(e));
    out.push_back(g);
  }
  return out;
}

std::string EncodeOprfResponse(const Evaluation& evaluation) {
  ByteWriter out(32 * evaluation.elements.size() + DleqProof::kEncodedSize);
  for (const GroupElement& z : evaluation.elements) out.PutBytes(z.bytes());
  out.PutBytes(evaluation.proof.Encode());
  return out.Release();
}

absl::StatusOr<Evaluation> DecodeOprfResponse(std::string_view payload) {
  if (payload.size() < 32 + DleqProof::kEncodedSize ||
      (payload.size() - DleqProof::kEncodedSize) % 32 != 0) {
    return absl::InvalidArgumentError("OPRF response length mismatch");
  }
  size_t n = (payload.size() - DleqProof::kEncodedSize) / 32;
  if (n > kMaxOprfBatchSize) {
    return absl::InvalidArgumentError("OPRF batch size out of range");
  }
  Evaluation ev;
  for (size_t i = 0; i < n; ++i) {
    NEBULA_ASSIGN_OR_RETURN(GroupElement z,
                            GroupElement::Decode(payload.substr(32 * i, 32)));
    ev.elements.push_back(z);
  }
  NEBULA_ASSIGN_OR_RETURN(ev.proof, DleqProof::Decode(payload.substr(32 * n)));
  return ev;
}

std::string EncodeAck(uint32_t count) {
  ByteWriter out(4);
  out.PutU32(count);
  return out.Release();
}

absl::StatusOr<uint32_t> DecodeAck(std::string_view payload) {
  if (payload.size() != 4) return absl::InvalidArgumentError("bad ack payload");
  ByteReader in(payload);
  return in.ReadU32();
}

Frame ErrorFrame(const absl::Status& status) {
  std::string payload;
  payload.push_back(static_cast<char>(status.code()));
  payload.append(status.message().data(), status.message().size());
  if (payload.size() > kMaxFramePayload) payload.resize(kMaxFramePayload);
  return Frame{MessageType::kError, std::move(payload)};
}

absl::Status DecodeError(std::string_view payload) {
  if (payload.empty()) return absl::UnknownError("empty error frame");
  auto code = static_cast<absl::StatusCode>(static_cast<uint8_t>(payload[0]));
  if (code == absl::StatusCode::kOk) code = absl::StatusCode::kUnknown;
  return absl::Status(code, std::string(payload.substr(1)));
}

}  // namespace nebula
