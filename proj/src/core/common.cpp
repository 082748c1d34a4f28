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

#include "common.hpp"

#include <openssl/evp.h>

#include <ctime>
#include <cstdio>

namespace qfi {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidGate: return "invalid_gate";
    case ErrorCode::Capacity: return "capacity_exceeded";
    case ErrorCode::Config: return "config_error";
    case ErrorCode::NotFound: return "not_found";
    case ErrorCode::Unavailable: return "device_unavailable";
    case ErrorCode::InvalidRequest: return "invalid_request";
    case ErrorCode::InsufficientEntropy: return "insufficient_entropy";
    case ErrorCode::TooShort: return "too_short";
    case ErrorCode::HeightOutOfRange: return "height_out_of_range";
    case ErrorCode::KeyExhausted: return "key_exhausted";
    case ErrorCode::ReuseForbidden: return "reuse_forbidden";
    case ErrorCode::InvalidState: return "invalid_state";
    case ErrorCode::InvalidTransition: return "invalid_transition";
    case ErrorCode::ConsentRequired: return "consent_required";
    case ErrorCode::PageForbidden: return "page_forbidden";
    case ErrorCode::AlreadySubmitted: return "already_submitted";
    case ErrorCode::Validation: return "validation_error";
    case ErrorCode::UnknownRegion: return "unknown_region";
    case ErrorCode::ChainCorrupt: return "ledger_corrupt";
    case ErrorCode::Io: return "io_error";
    }
    return "unknown";
}

Sha256::Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (ctx_ == nullptr || EVP_DigestInit_ex(static_cast<EVP_MD_CTX*>(ctx_), EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 context initialisation failed");
    }
}

Sha256::~Sha256() { EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_)); }

Sha256& Sha256::update(std::span<const std::uint8_t> data) {
    EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), data.data(), data.size());
    return *this;
}

Sha256& Sha256::update(std::string_view text) {
    EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), text.data(), text.size());
    return *this;
}

Digest Sha256::finish() {
    Digest out{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(ctx_), out.data(), &len);
    return out;
}

Digest sha256(std::span<const std::uint8_t> data) { return Sha256().update(data).finish(); }

Digest sha256(std::string_view text) { return Sha256().update(text).finish(); }

std::string to_hex(std::span<const std::uint8_t> data) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (auto b : data) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0f]);
    }
    return out;
}

namespace {
int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}
}  // namespace

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) fail(ErrorCode::Validation, "odd-length hex string");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = hex_value(hex[2 * i]);
        int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) fail(ErrorCode::Validation, "invalid lowercase hex string");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

std::uint64_t os_random_u64() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

namespace {
std::string format_uuid(std::array<std::uint8_t, 16> b) {
    b[6] = static_cast<std::uint8_t>((b[6] & 0x0f) | 0x40);
    b[8] = static_cast<std::uint8_t>((b[8] & 0x3f) | 0x80);
    auto hex = to_hex(b);
    return hex.substr(0, 8) + "-" + hex.substr(8, 4) + "-" + hex.substr(12, 4) + "-" +
           hex.substr(16, 4) + "-" + hex.substr(20, 12);
}
}  // namespace

std::string uuid_v4() {
    std::random_device rd;
    std::array<std::uint8_t, 16> b{};
    for (std::size_t i = 0; i < b.size(); i += 4) {
        auto word = rd();
        for (std::size_t k = 0; k < 4; ++k) b[i + k] = static_cast<std::uint8_t>(word >> (8 * k));
    }
    return format_uuid(b);
}

std::string uuid_v4_from(const Digest& digest) {
    std::array<std::uint8_t, 16> b{};
    std::copy_n(digest.begin(), 16, b.begin());
    return format_uuid(b);
}

TimePoint now_ms() {
    return std::chrono::time_point_cast<std::chrono::milliseconds>(std::chrono::system_clock::now());
}

std::string format_rfc3339(TimePoint tp) {
    auto ms = tp.time_since_epoch().count();
    auto secs = static_cast<std::time_t>(ms >= 0 ? ms / 1000 : (ms - 999) / 1000);
    auto frac = static_cast<int>(ms - static_cast<long long>(secs) * 1000);
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, frac);
    return buf;
}

TimePoint parse_rfc3339(std::string_view text) {
    std::tm tm{};
    int ms = 0;
    std::string s(text);
    if (std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%3dZ", &tm.tm_year, &tm.tm_mon, &tm.tm_mday,
                    &tm.tm_hour, &tm.tm_min, &tm.tm_sec, &ms) != 7) {
        fail(ErrorCode::Validation, "malformed timestamp: " + s);
    }
    tm.tm_year -= 1900;
    tm.tm_mon -= 1;
    auto secs = timegm(&tm);
    return TimePoint(std::chrono::milliseconds(static_cast<long long>(secs) * 1000 + ms));
}

std::string canonical(const json& doc) {
    return doc.dump(-1, ' ', false, json::error_handler_t::strict);
}

Bytes pack_bits(std::span<const std::uint8_t> bits) {
    Bytes out((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    }
    return out;
}

}  // namespace qfi
