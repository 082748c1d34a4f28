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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ledger.hpp"
#include "store.hpp"

using namespace qfi;
using namespace qfi::ledger;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("qfi-ledger-" + uuid_v4());
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string read_all(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_all(const fs::path& p, const std::string& s) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << s;
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string line; std::getline(ss, line);) out.push_back(line);
    return out;
}

void fill(Ledger& l, int n) {
    for (int i = 0; i < n; ++i)
        l.append(json{{"n", i}, {"text", "entry " + std::to_string(i)}}.dump(),
                 i % 2 ? PayloadKind::Artifact : PayloadKind::ExecutionRecord);
}

}  // namespace

TEST_CASE("hash preimage") {
    const auto h = compute_entry_hash(3, "2026-01-01T00:00:00.000Z", "{}", kGenesisPrev);
    CHECK(h == to_hex(sha256("3|2026-01-01T00:00:00.000Z|{}|" + kGenesisPrev)));
}

TEST_CASE("chain linkage and lookups") {
    TempDir dir;
    Ledger l((dir.path / "ledger.log").string());
    auto e0 = l.append("{\"a\":1}", PayloadKind::Artifact);
    auto e1 = l.append("{\"a\":2}", PayloadKind::Artifact);
    CHECK(e0.index == 0);
    CHECK(e0.prev_hash == kGenesisPrev);
    CHECK(e1.prev_hash == e0.entry_hash);
    CHECK(e0.entry_hash == compute_entry_hash(0, e0.timestamp, e0.payload, e0.prev_hash));
    l.append("{\"a\":3}", PayloadKind::ExecutionRecord);

    CHECK(l.get_entry(0).entry_hash == e0.entry_hash);
    try {
        l.get_entry(5);
        FAIL("expected not found");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotFound);
    }
    auto two = l.list_entries(0, 2);
    REQUIRE(two.size() == 2);
    CHECK(two[0].index == 0);
    CHECK(two[1].index == 1);
    CHECK(l.list_entries(2, 10).size() == 1);
    CHECK(l.list_entries(9, 10).empty());

    auto lines = lines_of(read_all(dir.path / "ledger.log"));
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == to_line(e0));
    CHECK(lines[0] == canonical(json::parse(lines[0])));
}

TEST_CASE("untouched ledger verifies and survives restart") {
    TempDir dir;
    const auto path = (dir.path / "ledger.log").string();
    {
        Ledger l(path);
        fill(l, 10);
        auto st = l.verify_chain();
        CHECK(st.ok);
        CHECK(st.length == 10);
    }
    const auto before = read_all(path);
    Ledger again(path);
    CHECK_FALSE(again.corrupt());
    CHECK(again.size() == 10);
    CHECK(again.verify_chain().ok);
    again.append("{}", PayloadKind::Artifact);
    CHECK(read_all(path).substr(0, before.size()) == before);
    CHECK(verify_file(path).ok);
}

TEST_CASE("payload byte flip in entry 4") {
    TempDir dir;
    const auto path = (dir.path / "ledger.log").string();
    {
        Ledger l(path);
        fill(l, 10);
    }
    auto lines = lines_of(read_all(path));
    auto doc = json::parse(lines[4]);
    auto payload = doc["payload"].get<std::string>();
    payload[payload.find("entry")] = 'E';
    doc["payload"] = payload;
    lines[4] = canonical(doc);
    std::string joined;
    for (const auto& l : lines) joined += l + "\n";
    write_all(path, joined);

    Ledger l(path);
    CHECK(l.corrupt());
    auto st = l.verify_chain();
    CHECK_FALSE(st.ok);
    CHECK(st.bad_index == 4);
    try {
        l.append("{}", PayloadKind::Artifact);
        FAIL("expected refusal");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ChainCorrupt);
    }
}

TEST_CASE("swapped entries 5 and 6") {
    TempDir dir;
    const auto path = (dir.path / "ledger.log").string();
    {
        Ledger l(path);
        fill(l, 10);
    }
    auto lines = lines_of(read_all(path));
    std::swap(lines[5], lines[6]);
    std::string joined;
    for (const auto& l : lines) joined += l + "\n";
    write_all(path, joined);
    auto st = verify_file(path);
    CHECK_FALSE(st.ok);
    CHECK(st.bad_index == 5);
}

TEST_CASE("random single-byte mutations are caught at or before the entry") {
    TempDir dir;
    const auto path = (dir.path / "ledger.log").string();
    {
        Ledger l(path);
        fill(l, 50);
    }
    const auto pristine = read_all(path);
    std::vector<std::size_t> line_start;
    for (std::size_t i = 0, at = 0; i < 50; ++i) {
        line_start.push_back(at);
        at = pristine.find('\n', at) + 1;
    }
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        auto bytes = pristine;
        const std::size_t pos = rng() % bytes.size();
        bytes[pos] = static_cast<char>(bytes[pos] ^ (1 + rng() % 255));
        const auto entry = std::upper_bound(line_start.begin(), line_start.end(), pos) - line_start.begin() - 1;
        write_all(path, bytes);
        Ledger l(path);
        auto st = l.verify_chain();
        CHECK_FALSE(st.ok);
        CHECK(st.bad_index <= static_cast<std::uint64_t>(entry));
    }
    write_all(path, pristine);
    CHECK(Ledger(path).verify_chain().ok);
}

TEST_CASE("non-canonical whitespace counts as tampering") {
    TempDir dir;
    const auto path = (dir.path / "ledger.log").string();
    {
        Ledger l(path);
        fill(l, 3);
    }
    auto text = read_all(path);
    text.insert(text.find(",\"payload\""), " ");
    write_all(path, text);
    auto st = verify_file(path);
    CHECK_FALSE(st.ok);
    CHECK(st.bad_index == 0);
}

TEST_CASE("event log drops an unterminated tail") {
    TempDir dir;
    const auto path = (dir.path / "events.log").string();
    store::EventLog log(path);
    log.append({{"k", 1}});
    log.append({{"k", 2}});
    {
        std::ofstream out(path, std::ios::app | std::ios::binary);
        out << "{\"k\":3";
    }
    auto docs = log.replay();
    REQUIRE(docs.size() == 2);
    CHECK(docs[1]["k"] == 2);

    write_all(path, "{\"k\":1}\nnot json\n");
    CHECK_THROWS_AS(log.replay(), Error);
}
