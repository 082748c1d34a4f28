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

#include <random>

#include "engage.hpp"

using namespace qfi;
using namespace qfi::engage;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Io;
}

// Walks a fresh session to `page`, granting consent at P3.
std::string session_at(Engine& e, Page page) {
    auto id = e.create_session().id;
    for (int p = 2; p <= static_cast<int>(page); ++p) {
        if (p == 4) e.record_consent(id, true);
        e.advance_page(id, static_cast<Page>(p));
    }
    return id;
}

}  // namespace

TEST_CASE("sessions start at P1 without consent") {
    Engine e;
    auto a = e.create_session();
    auto b = e.create_session();
    CHECK(a.id != b.id);
    CHECK(a.current_page == Page::P1);
    CHECK_FALSE(a.consent);
    CHECK(code_of([&] { e.get("missing"); }) == ErrorCode::NotFound);
}

TEST_CASE("page transitions") {
    Engine e;
    auto id = e.create_session().id;
    CHECK(e.advance_page(id, Page::P2).current_page == Page::P2);
    CHECK(code_of([&] { e.advance_page(id, Page::P5); }) == ErrorCode::InvalidTransition);
    CHECK(code_of([&] { e.advance_page(id, Page::P2); }) == ErrorCode::InvalidTransition);
    e.advance_page(id, Page::P1);
    e.advance_page(id, Page::P2);
    e.advance_page(id, Page::P3);
    CHECK(code_of([&] { e.advance_page(id, Page::P4); }) == ErrorCode::ConsentRequired);
}

TEST_CASE("consent") {
    Engine e;
    auto id = e.create_session().id;
    CHECK(code_of([&] { e.record_consent(id, true); }) == ErrorCode::InvalidState);
    e.advance_page(id, Page::P2);
    e.advance_page(id, Page::P3);
    e.record_consent(id, false);
    CHECK(code_of([&] { e.advance_page(id, Page::P4); }) == ErrorCode::ConsentRequired);
    CHECK(e.record_consent(id, true).consent);
    CHECK(e.advance_page(id, Page::P4).current_page == Page::P4);
}

TEST_CASE("word normalization") {
    CHECK(normalize_word(" Entangled ") == "entangled");
    CHECK(normalize_word("QUBIT-2") == "qubit-2");
    CHECK(normalize_word("\xC3\x9C" "BER") == "\xC3\xBC" "ber");  // Über
    CHECK(normalize_word(std::string(32, 'a')).size() == 32);
    CHECK(code_of([] { normalize_word(std::string(33, 'a')); }) == ErrorCode::Validation);
    CHECK(code_of([] { normalize_word("two words"); }) == ErrorCode::Validation);
    CHECK(code_of([] { normalize_word("   "); }) == ErrorCode::Validation);
    CHECK(code_of([] { normalize_word(""); }) == ErrorCode::Validation);
    CHECK(code_of([] { normalize_word("wow!"); }) == ErrorCode::Validation);
    CHECK(code_of([] { normalize_word("\xff"); }) == ErrorCode::Validation);
}

TEST_CASE("sentiment submission") {
    Engine e;
    auto early = session_at(e, Page::P3);
    e.record_consent(early, true);
    CHECK(code_of([&] { e.submit_sentiment(early, "x"); }) == ErrorCode::InvalidState);

    auto id = session_at(e, Page::P4);
    CHECK(e.submit_sentiment(id, " Entangled ").sentiment_word == "entangled");
    CHECK(code_of([&] { e.submit_sentiment(id, "again"); }) == ErrorCode::AlreadySubmitted);

    auto bad = session_at(e, Page::P4);
    CHECK(code_of([&] { e.submit_sentiment(bad, "two words"); }) == ErrorCode::Validation);
    CHECK_FALSE(e.get(bad).sentiment_word);

    auto no_consent = e.create_session().id;
    CHECK(code_of([&] { e.submit_sentiment(no_consent, "x"); }) == ErrorCode::ConsentRequired);
}

TEST_CASE("sentiment aggregate") {
    Engine e;
    CHECK(e.aggregate_sentiment(5).total_submissions == 0);
    CHECK(e.aggregate_sentiment(5).top_k.empty());
    for (const char* w : {"a", "b", "a"}) e.submit_sentiment(session_at(e, Page::P4), w);
    auto agg = e.aggregate_sentiment(1);
    CHECK(agg.total_submissions == 3);
    REQUIRE(agg.top_k.size() == 1);
    CHECK(agg.top_k[0] == std::pair<std::string, std::uint64_t>{"a", 2});

    Engine tie;
    for (const char* w : {"b", "a"}) tie.submit_sentiment(session_at(tie, Page::P4), w);
    auto t = tie.aggregate_sentiment(2);
    REQUIRE(t.top_k.size() == 2);
    CHECK(t.top_k[0].first == "a");
    CHECK(t.top_k[1].first == "b");
    CHECK(tie.aggregate_sentiment(10).top_k.size() == 2);
}

TEST_CASE("ballots") {
    Engine e;
    auto wrong = session_at(e, Page::P4);
    CHECK(code_of([&] { e.cast_ballot(wrong, {TechOption::ZeroKnowledgeProofs}); }) == ErrorCode::InvalidState);

    auto id = session_at(e, Page::P5);
    CHECK(e.cast_ballot(id, {TechOption::PostQuantumSignatures}).ballot.has_value());
    CHECK(code_of([&] { e.cast_ballot(id, {}); }) == ErrorCode::Validation);
    CHECK(code_of([&] {
              e.cast_ballot(id, {TechOption::PostQuantumSignatures, TechOption::QuantumKeyDistribution,
                                 TechOption::HashBasedCryptography, TechOption::ZeroKnowledgeProofs});
          }) == ErrorCode::Validation);

    auto swap = session_at(e, Page::P5);
    e.cast_ballot(swap, {TechOption::ZeroKnowledgeProofs});
    e.cast_ballot(swap, {TechOption::QuantumKeyDistribution});
    auto t = e.tally();
    CHECK(t.counts[TechOption::QuantumKeyDistribution] == 1);
    CHECK(t.counts[TechOption::ZeroKnowledgeProofs] == 0);
    CHECK(t.total_ballots == 2);
}

TEST_CASE("tally") {
    Engine empty;
    auto z = empty.tally();
    CHECK(z.total_ballots == 0);
    CHECK(z.counts.size() == 6);
    for (auto opt : kAllOptions) CHECK(z.counts[opt] == 0);

    Engine e;
    for (int i = 0; i < 3; ++i) e.cast_ballot(session_at(e, Page::P5), {TechOption::HashBasedCryptography});
    CHECK(e.tally().counts[TechOption::HashBasedCryptography] == 3);

    Engine one;
    one.cast_ballot(session_at(one, Page::P5), {TechOption::PostQuantumSignatures, TechOption::QuantumSafeSmartContracts});
    auto t = one.tally();
    CHECK(t.total_ballots == 1);
    CHECK(t.counts[TechOption::PostQuantumSignatures] == 1);
    CHECK(t.counts[TechOption::QuantumSafeSmartContracts] == 1);
    CHECK(to_json(t)["counts"].size() == 6);
}

TEST_CASE("sink failure leaves state untouched") {
    bool broken = false;
    Engine e([&](const Event&) {
        if (broken) throw Error(ErrorCode::Io, "disk full");
    });
    auto id = session_at(e, Page::P4);
    broken = true;
    CHECK(code_of([&] { e.submit_sentiment(id, "word"); }) == ErrorCode::Io);
    CHECK_FALSE(e.get(id).sentiment_word);
    CHECK(e.aggregate_sentiment(5).total_submissions == 0);
}

TEST_CASE("replaying the event stream reproduces state") {
    std::vector<json> log;
    Engine live([&](const Event& ev) { log.push_back(json::parse(to_json(ev).dump())); });
    std::mt19937_64 rng(9);
    std::vector<std::string> ids;
    for (int i = 0; i < 40; ++i) ids.push_back(live.create_session().id);
    const char* words[] = {"hope", "fear", "qubit", "Hope", "bad word", "risk"};
    for (int step = 0; step < 3000; ++step) {
        const auto& id = ids[rng() % ids.size()];
        try {
            switch (rng() % 5) {
            case 0: live.advance_page(id, static_cast<Page>(1 + rng() % 7)); break;
            case 1: live.record_consent(id, rng() % 4 != 0); break;
            case 2: live.submit_sentiment(id, words[rng() % 6]); break;
            case 3: {
                std::set<TechOption> sel;
                for (unsigned k = 0, n = rng() % 5; k < n; ++k) sel.insert(kAllOptions[rng() % 6]);
                live.cast_ballot(id, sel);
                break;
            }
            default: {
                auto cur = static_cast<int>(live.get(id).current_page);
                if (cur < 7) live.advance_page(id, static_cast<Page>(cur + 1));
            }
            }
        } catch (const Error&) {
        }
    }
    Engine replayed;
    for (const auto& doc : log) {
        REQUIRE(is_engage_event(doc));
        replayed.apply(event_from_json(doc));
    }
    for (const auto& id : ids) CHECK(to_json(live.get(id)) == to_json(replayed.get(id)));
    CHECK(to_json(live.tally()) == to_json(replayed.tally()));
    CHECK(to_json(live.aggregate_sentiment(10)) == to_json(replayed.aggregate_sentiment(10)));
    // no stored data past P3 without consent
    for (const auto& s : live.sessions()) {
        if (!s.consent) {
            CHECK(static_cast<int>(s.current_page) <= 3);
        }
        if (s.sentiment_word || s.ballot) CHECK(s.consent);
    }
}
