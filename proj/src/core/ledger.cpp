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

#include "ledger.hpp"

#include "store.hpp"

#include <fstream>
#include <mutex>
#include <sstream>

namespace qfi::ledger {

const char* to_string(PayloadKind k) { return k == PayloadKind::Artifact ? "Artifact" : "ExecutionRecord"; }

PayloadKind parse_payload_kind(const std::string& s) {
    if (s == "Artifact") return PayloadKind::Artifact;
    if (s == "ExecutionRecord") return PayloadKind::ExecutionRecord;
    fail(ErrorCode::Validation, "unknown payload kind '" + s + "'");
}

std::string compute_entry_hash(std::uint64_t index, const std::string& timestamp, const std::string& payload,
                               const std::string& prev_hash) {
    Sha256 h;
    h.update(std::to_string(index)).update("|").update(timestamp).update("|").update(payload).update("|").update(prev_hash);
    return to_hex(h.finish());
}

json to_json(const LedgerEntry& e) {
    return {{"index", e.index},
            {"timestamp", e.timestamp},
            {"payload_kind", to_string(e.payload_kind)},
            {"payload", e.payload},
            {"prev_hash", e.prev_hash},
            {"entry_hash", e.entry_hash}};
}

std::string to_line(const LedgerEntry& e) { return canonical(to_json(e)); }

json to_json(const ChainStatus& s) {
    json j = {{"ok", s.ok}, {"length", s.length}};
    if (!s.ok) {
        j["bad_index"] = s.bad_index;
        j["reason"] = s.reason;
    }
    return j;
}

namespace {

struct Scan {
    std::vector<LedgerEntry> entries;
    ChainStatus status;
};

std::optional<LedgerEntry> parse_line(const std::string& line, std::string& why) {
    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        why = "line is not a JSON object";
        return std::nullopt;
    }
    try {
        LedgerEntry e;
        e.index = doc.at("index").get<std::uint64_t>();
        e.timestamp = doc.at("timestamp").get<std::string>();
        e.payload_kind = parse_payload_kind(doc.at("payload_kind").get<std::string>());
        e.payload = doc.at("payload").get<std::string>();
        e.prev_hash = doc.at("prev_hash").get<std::string>();
        e.entry_hash = doc.at("entry_hash").get<std::string>();
        if (doc.size() != 6) {
            why = "unexpected fields";
            return std::nullopt;
        }
        if (to_line(e) != line) {
            why = "line is not in canonical form";
            return std::nullopt;
        }
        return e;
    } catch (const std::exception& ex) {
        why = std::string("missing or mistyped field: ") + ex.what();
        return std::nullopt;
    }
}

/// Walks the raw file; the first problem stops the scan and its position is
/// the reported bad index.
Scan scan_file(const std::string& path) {
    Scan out;
    std::ifstream in(path, std::ios::binary);
    if (!in) return out;  // absent file is an empty chain
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string data = ss.str();

    auto bad = [&](std::uint64_t at, std::string why) {
        out.status.ok = false;
        out.status.bad_index = at;
        out.status.reason = std::move(why);
        out.status.length = out.entries.size();
    };

    std::string prev = kGenesisPrev;
    std::size_t pos = 0;
    while (pos < data.size()) {
        const std::uint64_t at = out.entries.size();
        const auto nl = data.find('\n', pos);
        if (nl == std::string::npos) {
            bad(at, "truncated line");
            return out;
        }
        std::string why;
        auto entry = parse_line(data.substr(pos, nl - pos), why);
        if (!entry) {
            bad(at, why);
            return out;
        }
        if (entry->index != at) {
            bad(at, "index " + std::to_string(entry->index) + " out of sequence");
            return out;
        }
        if (entry->prev_hash != prev) {
            bad(at, "prev_hash does not link to the previous entry");
            return out;
        }
        if (compute_entry_hash(entry->index, entry->timestamp, entry->payload, entry->prev_hash) != entry->entry_hash) {
            bad(at, "entry_hash mismatch");
            return out;
        }
        prev = entry->entry_hash;
        out.entries.push_back(std::move(*entry));
        pos = nl + 1;
    }
    out.status.length = out.entries.size();
    return out;
}

}  // namespace

ChainStatus verify_file(const std::string& path) { return scan_file(path).status; }

Ledger::Ledger(std::string path) : path_(std::move(path)) {
    auto scan = scan_file(path_);
    entries_ = std::move(scan.entries);
    corrupt_ = !scan.status.ok;
}

LedgerEntry Ledger::append(const std::string& payload, PayloadKind kind, std::optional<TimePoint> at) {
    std::unique_lock lock(mu_);
    if (corrupt_) fail(ErrorCode::ChainCorrupt, "ledger chain is corrupt; appends are refused");
    LedgerEntry e;
    e.index = entries_.size();
    e.timestamp = format_rfc3339(at.value_or(now_ms()));
    e.payload_kind = kind;
    e.payload = payload;
    e.prev_hash = entries_.empty() ? kGenesisPrev : entries_.back().entry_hash;
    e.entry_hash = compute_entry_hash(e.index, e.timestamp, e.payload, e.prev_hash);
    store::append_durable(path_, to_line(e) + "\n");
    entries_.push_back(e);
    return e;
}

ChainStatus Ledger::verify_chain() {
    std::unique_lock lock(mu_);
    auto scan = scan_file(path_);
    corrupt_ = !scan.status.ok;
    if (scan.status.ok) entries_ = std::move(scan.entries);
    return scan.status;
}

LedgerEntry Ledger::get_entry(std::uint64_t index) const {
    std::shared_lock lock(mu_);
    if (index >= entries_.size()) fail(ErrorCode::NotFound, "ledger has no entry " + std::to_string(index));
    return entries_[index];
}

std::vector<LedgerEntry> Ledger::list_entries(std::uint64_t offset, std::uint64_t limit) const {
    std::shared_lock lock(mu_);
    std::vector<LedgerEntry> out;
    for (auto i = offset; i < entries_.size() && out.size() < limit; ++i) out.push_back(entries_[i]);
    return out;
}

std::uint64_t Ledger::size() const {
    std::shared_lock lock(mu_);
    return entries_.size();
}

bool Ledger::corrupt() const {
    std::shared_lock lock(mu_);
    return corrupt_;
}

}  // namespace qfi::ledger
