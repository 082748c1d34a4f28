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

/// Participant sessions over the seven-page flow, sentiment capture and
/// approval voting. Every accepted mutation is expressed as an Event and
/// handed to the sink before it is applied, so replaying the sink's log
/// through apply() reproduces the in-memory state exactly.

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "common.hpp"

namespace qfi::engage {

enum class Page { P1 = 1, P2, P3, P4, P5, P6, P7 };

std::string to_string(Page p);
Page parse_page(const std::string& s);

enum class TechOption {
    PostQuantumSignatures,
    QuantumKeyDistribution,
    HashBasedCryptography,
    QuantumRandomNumberGeneration,
    QuantumSafeSmartContracts,
    ZeroKnowledgeProofs,
};

inline constexpr std::array<TechOption, 6> kAllOptions = {
    TechOption::PostQuantumSignatures,      TechOption::QuantumKeyDistribution,
    TechOption::HashBasedCryptography,      TechOption::QuantumRandomNumberGeneration,
    TechOption::QuantumSafeSmartContracts,  TechOption::ZeroKnowledgeProofs,
};

const char* to_string(TechOption t);
TechOption parse_tech_option(const std::string& s);

inline constexpr std::size_t kMaxSelections = 3;
inline constexpr std::size_t kMaxWordLength = 32;

struct Ballot {
    std::set<TechOption> selections;
    std::string cast_at;
};

struct Session {
    std::string id;
    Page current_page = Page::P1;
    bool consent = false;
    std::optional<std::string> sentiment_word;
    std::optional<Ballot> ballot;
    std::string created_at;
};

json to_json(const Session& s);

struct SentimentAggregate {
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t total_submissions = 0;
    std::vector<std::pair<std::string, std::uint64_t>> top_k;
};

json to_json(const SentimentAggregate& a);

struct Tally {
    std::map<TechOption, std::uint64_t> counts;
    std::uint64_t total_ballots = 0;
};

json to_json(const Tally& t);

/// Trim, case-fold, then require 1..32 letters, digits or hyphens. Throws
/// Validation with the reason.
std::string normalize_word(std::string_view raw);

enum class EventKind { SessionCreated, PageChanged, ConsentRecorded, SentimentSubmitted, BallotCast };

struct Event {
    EventKind kind = EventKind::SessionCreated;
    std::string session_id;
    std::string at;  // RFC 3339
    Page page = Page::P1;
    bool granted = false;
    std::string word;
    std::set<TechOption> selections;
};

json to_json(const Event& e);
Event event_from_json(const json& doc);
/// True for documents written by to_json(Event).
bool is_engage_event(const json& doc);

class Engine {
  public:
    /// The sink persists an event durably; if it throws, the mutation is not applied.
    using Sink = std::function<void(const Event&)>;

    explicit Engine(Sink sink = {});

    Session create_session();
    Session advance_page(const std::string& id, Page target);
    Session record_consent(const std::string& id, bool granted);
    Session submit_sentiment(const std::string& id, std::string_view word);
    Session cast_ballot(const std::string& id, const std::set<TechOption>& selections);

    /// Applies an already-accepted event without validation (log replay).
    void apply(const Event& e);

    SentimentAggregate aggregate_sentiment(std::size_t k) const;
    Tally tally() const;
    std::optional<Session> find(const std::string& id) const;
    /// Throws NotFound.
    Session get(const std::string& id) const;
    std::vector<Session> sessions() const;

  private:
    Session commit(const Event& e);
    Session& require(const std::string& id);
    void apply_locked(const Event& e);

    Sink sink_;
    mutable std::shared_mutex mu_;
    std::unordered_map<std::string, Session> sessions_;
    std::map<std::string, std::uint64_t> word_counts_;
};

}  // namespace qfi::engage
