// Copyright 2026 The parcorp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/rand.h>
#include <openssl/sha.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "parcorp/error.hpp"
#include "parcorp/util/strings.hpp"

namespace parcorp::crypto {

inline std::string to_hex(const unsigned char* data, std::size_t size) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(size * 2);
  for (std::size_t i = 0; i < size; ++i) {
    out += digits[data[i] >> 4];
    out += digits[data[i] & 0xf];
  }
  return out;
}

inline std::vector<unsigned char> from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  if (hex.size() % 2) throw Error(ErrorCode::InvalidValue, "odd-length hex string");
  std::vector<unsigned char> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = nibble(hex[2 * i]);
    const int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw Error(ErrorCode::InvalidValue, "bad hex digit");
    out[i] = static_cast<unsigned char>(hi << 4 | lo);
  }
  return out;
}

/// `bytes` bytes from the OpenSSL CSPRNG, hex encoded.
inline std::string random_hex(std::size_t bytes) {
  std::vector<unsigned char> buf(bytes);
  if (RAND_bytes(buf.data(), static_cast<int>(buf.size())) != 1) {
    throw Error(ErrorCode::InvalidValue, "random source failure");
  }
  return to_hex(buf.data(), buf.size());
}

inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), digest);
  return to_hex(digest, sizeof digest);
}

inline constexpr int kDefaultIterations = 20000;

namespace detail {
inline std::string pbkdf2(std::string_view password, const std::vector<unsigned char>& salt, int iterations) {
  unsigned char key[32];
  if (PKCS5_PBKDF2_HMAC(password.data(), static_cast<int>(password.size()), salt.data(),
                        static_cast<int>(salt.size()), iterations, EVP_sha256(), sizeof key, key) != 1) {
    throw Error(ErrorCode::InvalidValue, "key derivation failure");
  }
  return to_hex(key, sizeof key);
}
}  // namespace detail

/// Opaque password verifier: `pbkdf2-sha256$<iterations>$<salt>$<key>`.
inline std::string make_verifier(std::string_view password, int iterations = kDefaultIterations) {
  const auto salt = from_hex(random_hex(16));
  return "pbkdf2-sha256$" + std::to_string(iterations) + "$" + to_hex(salt.data(), salt.size()) + "$" +
         detail::pbkdf2(password, salt, iterations);
}

inline bool verify(std::string_view password, std::string_view verifier) {
  const auto parts = strings::split(verifier, '$');
  if (parts.size() != 4 || parts[0] != "pbkdf2-sha256") return false;
  int iterations = 0;
  try {
    iterations = std::stoi(std::string(parts[1]));
  } catch (...) {
    return false;
  }
  if (iterations < 1) return false;
  const auto expected = std::string(parts[3]);
  const auto actual = detail::pbkdf2(password, from_hex(parts[2]), iterations);
  return expected.size() == actual.size() &&
         CRYPTO_memcmp(expected.data(), actual.data(), expected.size()) == 0;
}

}  // namespace parcorp::crypto
