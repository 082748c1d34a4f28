// Copyright 2026 The QFI Authors
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

#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace qfi {

using json = nlohmann::json;
using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;
using TimePoint = std::chrono::time_point<std::chrono::system_clock, std::chrono::milliseconds>;

enum class ErrorCode {
    InvalidGate,
    Capacity,
    Config,
    NotFound,
    Unavailable,
    InvalidRequest,
    InsufficientEntropy,
    TooShort,
    HeightOutOfRange,
    KeyExhausted,
    ReuseForbidden,
    InvalidState,
    InvalidTransition,
    ConsentRequired,
    PageForbidden,
    AlreadySubmitted,
    Validation,
    UnknownRegion,
    ChainCorrupt,
    Io,
};

const char* error_code_name(ErrorCode code);

/// Every failure raised by the core carries one of the closed set of codes
/// above; the C API and the HTTP layer translate from it.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

// ---- hashing ---------------------------------------------------------------

/// Incremental SHA-256 (backed by OpenSSL's EVP interface).
class Sha256 {
  public:
    Sha256();
    ~Sha256();
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    Sha256& update(std::span<const std::uint8_t> data);
    Sha256& update(std::string_view text);
    Digest finish();

  private:
    void* ctx_;
};

Digest sha256(std::span<const std::uint8_t> data);
Digest sha256(std::string_view text);

std::string to_hex(std::span<const std::uint8_t> data);
Bytes from_hex(std::string_view hex);

template <std::size_t N>
std::array<std::uint8_t, N> from_hex_fixed(std::string_view hex) {
    if (hex.size() != 2 * N) {
        fail(ErrorCode::Validation, "expected " + std::to_string(2 * N) + " hex characters");
    }
    auto bytes = from_hex(hex);
    std::array<std::uint8_t, N> out{};
    std::copy(bytes.begin(), bytes.end(), out.begin());
    return out;
}

// ---- identifiers and time ---------------------------------------------------

/// Random version-4 UUID from the operating system entropy source.
std::string uuid_v4();

/// Version-4 UUID laid out from the first 16 bytes of a digest. Used where a
/// caller needs reproducible identifiers.
std::string uuid_v4_from(const Digest& digest);

/// 64 bits from the operating system entropy source.
std::uint64_t os_random_u64();

TimePoint now_ms();
/// RFC 3339 UTC with millisecond precision, e.g. 2026-01-02T03:04:05.006Z.
std::string format_rfc3339(TimePoint tp);
TimePoint parse_rfc3339(std::string_view text);

// ---- canonical documents ----------------------------------------------------

/// Sorted keys, no insignificant whitespace, UTF-8 output.
std::string canonical(const json& doc);

/// Bits are packed MSB-first; a trailing partial byte is zero padded.
Bytes pack_bits(std::span<const std::uint8_t> bits);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
inline double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace qfi
