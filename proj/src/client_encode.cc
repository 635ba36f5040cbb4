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

#include "nebula/client_encode.h"

#include <sodium.h>

#include <string>

#include "absl/strings/str_cat.h"
#include "nebula/hash.h"
#include "nebula/status_macros.h"

namespace nebula {

SubRandomness ParseRandomness(const Bytes32& r) {
  auto part = [&](char index) {
    return HashToBytes32(domains::kSubRandomness,
                         {AsStringView(r), std::string_view(&index, 1)});
  };
  return {part(1), part(2), part(3)};
}

FieldElement SecretFromKeySeed(const Bytes32& key_seed) {
  return FieldElement::FromUniformBytes(
      HashToBytes64(domains::kSecretEmbedding, {AsStringView(key_seed)}));
}

Bytes32 DeriveSymmetricKey(const FieldElement& secret) {
  return HashToBytes32(domains::kSymmetricKey, {AsStringView(secret.bytes())});
}

absl::StatusOr<KeyShare> MakeShare(const Bytes32& key_seed,
                                   const Bytes32& share_seed, int threshold,
                                   SecureRandom& rng) {
  if (threshold < 1) return absl::InvalidArgumentError("threshold must be >= 1");
  SharingPolynomial poly = SharingPolynomial::FromSeed(
      SecretFromKeySeed(key_seed), share_seed, threshold);
  FieldElement x = FieldElement::RandomNonZero(rng);
  return KeyShare{x, poly.Evaluate(x)};
}

absl::StatusOr<std::string> EncryptValue(const Bytes32& key_seed,
                                         std::string_view value,
                                         size_t max_value_length) {
  if (value.size() > max_value_length) {
    return absl::InvalidArgumentError(
        absl::StrCat("value of ", value.size(), " bytes exceeds the maximum of ",
                     max_value_length));
  }
  Bytes32 key = DeriveSymmetricKey(SecretFromKeySeed(key_seed));
  std::string plaintext;
  plaintext.reserve(32 + value.size());
  plaintext.append(AsStringView(key_seed));
  plaintext.append(value);

  std::string ciphertext(plaintext.size() + kAeadTagSize, '\0');
  unsigned long long written = 0;
  const unsigned char nonce[crypto_aead_chacha20poly1305_ietf_NPUBBYTES] = {};
  crypto_aead_chacha20poly1305_ietf_encrypt(
      reinterpret_cast<unsigned char*>(ciphertext.data()), &written,
      reinterpret_cast<const unsigned char*>(plaintext.data()),
      plaintext.size(),
      reinterpret_cast<const unsigned char*>(kValueAssociatedData.data()), kValueAssociatedData.size(),
      nullptr, nonce, key.data());
  ciphertext.resize(written);
  return ciphertext;
}

absl::StatusOr<std::string> DecryptValue(const FieldElement& secret,
                                         std::string_view ciphertext) {
  if (ciphertext.size() < kCiphertextOverhead) {
    return absl::InvalidArgumentError("ciphertext too short");
  }
  Bytes32 key = DeriveSymmetricKey(secret);
  std::string plaintext(ciphertext.size() - kAeadTagSize, '\0');
  unsigned long long written = 0;
  const unsigned char nonce[crypto_aead_chacha20poly1305_ietf_NPUBBYTES] = {};
  if (crypto_aead_chacha20poly1305_ietf_decrypt(
          reinterpret_cast<unsigned char*>(plaintext.data()), &written, nullptr,
          reinterpret_cast<const unsigned char*>(ciphertext.data()),
          ciphertext.size(),
          reinterpret_cast<const unsigned char*>(kValueAssociatedData.data()),
          kValueAssociatedData.size(), nonce, key.data()) != 0) {
    return absl::DataLossError("ciphertext failed authentication");
  }
  plaintext.resize(written);
  Bytes32 key_seed = ToBytes32(plaintext);
  if (SecretFromKeySeed(key_seed) != secret) {
    return absl::DataLossError("embedded key seed does not match the secret");
  }
  return plaintext.substr(32);
}

bool Participate(double p, SecureRandom& rng) { return rng.Uniform() < p; }

void Submission::AppendTo(ByteWriter& out) const {
  out.PutBytes(tag);
  out.PutBytes(share.x.bytes());
  out.PutBytes(share.y.bytes());
  out.PutU16(static_cast<uint16_t>(ciphertext.size()));
  out.PutBytes(ciphertext);
}

std::string Submission::Serialize() const {
  ByteWriter out(SerializedSize());
  AppendTo(out);
  return out.Release();
}

absl::StatusOr<Submission> Submission::ReadFrom(ByteReader& in) {
  Submission s;
  NEBULA_ASSIGN_OR_RETURN(s.tag, in.ReadBytes32());
  NEBULA_ASSIGN_OR_RETURN(std::string_view x, in.ReadBytes(32));
  NEBULA_ASSIGN_OR_RETURN(std::string_view y, in.ReadBytes(32));
  NEBULA_ASSIGN_OR_RETURN(s.share.x, FieldElement::Decode(x));
  NEBULA_ASSIGN_OR_RETURN(s.share.y, FieldElement::Decode(y));
  NEBULA_ASSIGN_OR_RETURN(uint16_t len, in.ReadU16());
  NEBULA_ASSIGN_OR_RETURN(std::string_view ct, in.ReadBytes(len));
  s.ciphertext = std::string(ct);
  return s;
}

absl::StatusOr<Submission> Submission::Parse(std::string_view bytes) {
  ByteReader in(bytes);
  NEBULA_ASSIGN_OR_RETURN(Submission s, ReadFrom(in));
  if (!in.empty()) {
    return absl::InvalidArgumentError("trailing bytes after submission");
  }
  return s;
}

absl::StatusOr<ValueEncoder> ValueEncoder::Create(std::string_view value,
                                                  const Bytes32& r,
                                                  int threshold,
                                                  size_t max_value_length) {
  if (threshold < 1) return absl::InvalidArgumentError("threshold must be >= 1");
  SubRandomness sub = ParseRandomness(r);
  NEBULA_ASSIGN_OR_RETURN(std::string ciphertext,
                          EncryptValue(sub.key_seed, value, max_value_length));
  FieldElement secret = SecretFromKeySeed(sub.key_seed);
  return ValueEncoder(
      sub.tag, DeriveSymmetricKey(secret), std::move(ciphertext),
      SharingPolynomial::FromSeed(secret, sub.share_seed, threshold));
}

Submission ValueEncoder::Encode(SecureRandom& rng) const {
  FieldElement x = FieldElement::RandomNonZero(rng);
  return Submission{tag_, KeyShare{x, polynomial_.Evaluate(x)}, ciphertext_};
}

absl::StatusOr<Submission> BuildSubmission(std::string_view x,
                                           const Bytes32& r,
                                           const DpParams& params,
                                           SecureRandom& rng) {
  NEBULA_ASSIGN_OR_RETURN(ValueEncoder enc,
                          ValueEncoder::Create(x, r, params.threshold));
  return enc.Encode(rng);
}

}  // namespace nebula
