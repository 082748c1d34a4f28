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

/// Append-only, hash-chained provenance log stored as JSON lines.
///
/// entry_hash = SHA-256(index "|" timestamp "|" payload "|" prev_hash), with
/// the index in decimal and prev_hash in lowercase hex; the genesis entry
/// links to 64 '0' characters. Every stored line is the canonical form of
/// its entry, so a line that does not re-serialise byte-for-byte is treated
/// as tampered.

#include <cstdint>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "common.hpp"

namespace qfi::ledger {

enum class PayloadKind { Artifact, ExecutionRecord };

const char* to_string(PayloadKind k);
PayloadKind parse_payload_kind(const std::string& s);

inline const std::string kGenesisPrev(64, '0');

struct LedgerEntry {
    std::uint64_t index = 0;
    std::string timestamp;
    PayloadKind payload_kind = PayloadKind::Artifact;
    std::string payload;
    std::string prev_hash;
    std::string entry_hash;
};

std::string compute_entry_hash(std::uint64_t index, const std::string& timestamp, const std::string& payload,
                               const std::string& prev_hash);

json to_json(const LedgerEntry& e);
/// The exact line written to disk (without the newline).
std::string to_line(const LedgerEntry& e);

struct ChainStatus {
    bool ok = true;
    std::uint64_t length = 0;     // entries checked (ok) or total entries seen
    std::uint64_t bad_index = 0;  // first failing entry when !ok
    std::string reason;
};

json to_json(const ChainStatus& s);

/// Checks a ledger file's raw bytes without opening a store.
ChainStatus verify_file(const std::string& path);

class Ledger {
  public:
    /// Opens (creating if absent) and verifies the file. A corrupt chain is
    /// readable but refuses appends until verify_chain() reports ok again.
    explicit Ledger(std::string path);

    /// Durable: the line is written and fsync'd before the entry becomes
    /// visible to readers. Throws ChainCorrupt or Io.
    LedgerEntry append(const std::string& payload, PayloadKind kind, std::optional<TimePoint> at = std::nullopt);

    /// Re-reads the file and checks every line; clears the corrupt flag on ok.
    ChainStatus verify_chain();

    /// Throws NotFound.
    LedgerEntry get_entry(std::uint64_t index) const;
    std::vector<LedgerEntry> list_entries(std::uint64_t offset, std::uint64_t limit) const;
    std::uint64_t size() const;
    bool corrupt() const;
    const std::string& path() const noexcept { return path_; }

  private:
    std::string path_;
    mutable std::shared_mutex mu_;
    std::vector<LedgerEntry> entries_;
    bool corrupt_ = false;
};

}  // namespace qfi::ledger
