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

#include "engage.hpp"

#include <algorithm>
#include <clocale>
#include <cwctype>
#include <locale.h>
#include <mutex>

namespace qfi::engage {

std::string to_string(Page p) { return "P" + std::to_string(static_cast<int>(p)); }

Page parse_page(const std::string& s) {
    if (s.size() == 2 && s[0] == 'P' && s[1] >= '1' && s[1] <= '7') return static_cast<Page>(s[1] - '0');
    fail(ErrorCode::Validation, "unknown page '" + s + "'");
}

const char* to_string(TechOption t) {
    switch (t) {
    case TechOption::PostQuantumSignatures: return "PostQuantumSignatures";
    case TechOption::QuantumKeyDistribution: return "QuantumKeyDistribution";
    case TechOption::HashBasedCryptography: return "HashBasedCryptography";
    case TechOption::QuantumRandomNumberGeneration: return "QuantumRandomNumberGeneration";
    case TechOption::QuantumSafeSmartContracts: return "QuantumSafeSmartContracts";
    case TechOption::ZeroKnowledgeProofs: return "ZeroKnowledgeProofs";
    }
    return "?";
}

TechOption parse_tech_option(const std::string& s) {
    for (auto t : kAllOptions) {
        if (s == to_string(t)) return t;
    }
    fail(ErrorCode::Validation, "unknown technology option '" + s + "'");
}

namespace {

json selections_json(const std::set<TechOption>& sel) {
    json arr = json::array();
    for (auto t : sel) arr.push_back(to_string(t));
    return arr;
}

// ---- UTF-8 word normalisation ---------------------------------------------

locale_t utf8_locale() {
    static locale_t loc = [] {
        locale_t l = newlocale(LC_ALL_MASK, "C.UTF-8", static_cast<locale_t>(0));
        if (l == static_cast<locale_t>(0)) l = newlocale(LC_ALL_MASK, "C.utf8", static_cast<locale_t>(0));
        return l;
    }();
    return loc;
}

std::u32string decode_utf8(std::string_view s) {
    std::u32string out;
    for (std::size_t i = 0; i < s.size();) {
        const auto c = static_cast<unsigned char>(s[i]);
        std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xe ? 3 : (c >> 3) == 0x1e ? 4 : 0;
        if (len == 0 || i + len > s.size()) fail(ErrorCode::Validation, "word is not valid UTF-8");
        char32_t cp = len == 1 ? c : c & (0x7f >> len);
        for (std::size_t k = 1; k < len; ++k) {
            const auto cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xc0) != 0x80) fail(ErrorCode::Validation, "word is not valid UTF-8");
            cp = (cp << 6) | (cc & 0x3f);
        }
        static constexpr char32_t kMinForLen[] = {0, 0, 0x80, 0x800, 0x10000};
        if (cp < kMinForLen[len] || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) {
            fail(ErrorCode::Validation, "word is not valid UTF-8");
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string encode_utf8(const std::u32string& s) {
    std::string out;
    for (char32_t cp : s) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
        } else {
            out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
        }
    }
    return out;
}

}  // namespace

std::string normalize_word(std::string_view raw) {
    const locale_t loc = utf8_locale();
    auto is_space = [&](char32_t c) { return iswspace_l(static_cast<wint_t>(c), loc) != 0; };

    auto cps = decode_utf8(raw);
    auto first = std::find_if_not(cps.begin(), cps.end(), is_space);
    auto last = std::find_if_not(cps.rbegin(), cps.rend(), is_space).base();
    std::u32string word = first < last ? std::u32string(first, last) : std::u32string();

    if (word.empty()) fail(ErrorCode::Validation, "word is empty");
    if (std::any_of(word.begin(), word.end(), is_space)) fail(ErrorCode::Validation, "word contains whitespace");
    if (word.size() > kMaxWordLength) fail(ErrorCode::Validation, "word exceeds 32 characters");
    for (auto& c : word) {
        c = static_cast<char32_t>(towlower_l(static_cast<wint_t>(c), loc));
        if (c != U'-' && !iswalnum_l(static_cast<wint_t>(c), loc)) {
            fail(ErrorCode::Validation, "word may contain only letters, digits and hyphens");
        }
    }
    return encode_utf8(word);
}

// ---- documents ---------------------------------------------------------------

json to_json(const Session& s) {
    json j = {{"session_id", s.id},
              {"page", to_string(s.current_page)},
              {"consent", s.consent},
              {"created_at", s.created_at}};
    j["sentiment_word"] = s.sentiment_word ? json(*s.sentiment_word) : json(nullptr);
    if (s.ballot) {
        j["ballot"] = {{"selections", selections_json(s.ballot->selections)}, {"cast_at", s.ballot->cast_at}};
    } else {
        j["ballot"] = nullptr;
    }
    return j;
}

json to_json(const SentimentAggregate& a) {
    json top = json::array();
    for (const auto& [w, n] : a.top_k) top.push_back({{"word", w}, {"count", n}});
    return {{"counts", a.counts}, {"total_submissions", a.total_submissions}, {"top_k", top}};
}

json to_json(const Tally& t) {
    json counts = json::object();
    for (const auto& [opt, n] : t.counts) counts[to_string(opt)] = n;
    return {{"counts", counts}, {"total_ballots", t.total_ballots}};
}

namespace {
const char* event_name(EventKind k) {
    switch (k) {
    case EventKind::SessionCreated: return "session_created";
    case EventKind::PageChanged: return "page_changed";
    case EventKind::ConsentRecorded: return "consent_recorded";
    case EventKind::SentimentSubmitted: return "sentiment_submitted";
    case EventKind::BallotCast: return "ballot_cast";
    }
    return "?";
}
}  // namespace

json to_json(const Event& e) {
    json j = {{"type", event_name(e.kind)}, {"session_id", e.session_id}, {"at", e.at}};
    switch (e.kind) {
    case EventKind::SessionCreated: break;
    case EventKind::PageChanged: j["page"] = to_string(e.page); break;
    case EventKind::ConsentRecorded: j["granted"] = e.granted; break;
    case EventKind::SentimentSubmitted: j["word"] = e.word; break;
    case EventKind::BallotCast: j["selections"] = selections_json(e.selections); break;
    }
    return j;
}

bool is_engage_event(const json& doc) {
    if (!doc.is_object() || !doc.contains("type") || !doc["type"].is_string()) return false;
    const auto t = doc["type"].get<std::string>();
    for (auto k : {EventKind::SessionCreated, EventKind::PageChanged, EventKind::ConsentRecorded,
                   EventKind::SentimentSubmitted, EventKind::BallotCast}) {
        if (t == event_name(k)) return true;
    }
    return false;
}

Event event_from_json(const json& doc) {
    try {
        Event e;
        const auto t = doc.at("type").get<std::string>();
        e.session_id = doc.at("session_id").get<std::string>();
        e.at = doc.at("at").get<std::string>();
        if (t == "session_created") {
            e.kind = EventKind::SessionCreated;
        } else if (t == "page_changed") {
            e.kind = EventKind::PageChanged;
            e.page = parse_page(doc.at("page").get<std::string>());
        } else if (t == "consent_recorded") {
            e.kind = EventKind::ConsentRecorded;
            e.granted = doc.at("granted").get<bool>();
        } else if (t == "sentiment_submitted") {
            e.kind = EventKind::SentimentSubmitted;
            e.word = doc.at("word").get<std::string>();
        } else if (t == "ballot_cast") {
            e.kind = EventKind::BallotCast;
            for (const auto& s : doc.at("selections")) e.selections.insert(parse_tech_option(s.get<std::string>()));
        } else {
            fail(ErrorCode::Validation, "unknown event type '" + t + "'");
        }
        return e;
    } catch (const json::exception& ex) {
        fail(ErrorCode::Validation, std::string("malformed event: ") + ex.what());
    }
}

// ---- engine ------------------------------------------------------------------

Engine::Engine(Sink sink) : sink_(std::move(sink)) {}

Session& Engine::require(const std::string& id) {
    auto it = sessions_.find(id);
    if (it == sessions_.end()) fail(ErrorCode::NotFound, "unknown session '" + id + "'");
    return it->second;
}

Session Engine::commit(const Event& e) {
    if (sink_) sink_(e);
    apply_locked(e);
    return sessions_.at(e.session_id);
}

Session Engine::create_session() {
    std::unique_lock lock(mu_);
    Event e;
    e.kind = EventKind::SessionCreated;
    do {
        e.session_id = uuid_v4();
    } while (sessions_.count(e.session_id));
    e.at = format_rfc3339(now_ms());
    return commit(e);
}

Session Engine::advance_page(const std::string& id, Page target) {
    std::unique_lock lock(mu_);
    const auto& s = require(id);
    const int from = static_cast<int>(s.current_page);
    const int to = static_cast<int>(target);
    if (to != from + 1 && to != from - 1) {
        fail(ErrorCode::InvalidTransition, "cannot move from " + to_string(s.current_page) + " to " + to_string(target));
    }
    if (target == Page::P4 && !s.consent) fail(ErrorCode::ConsentRequired, "consent is required before P4");
    Event e{EventKind::PageChanged, id, format_rfc3339(now_ms()), target, false, {}, {}};
    return commit(e);
}

Session Engine::record_consent(const std::string& id, bool granted) {
    std::unique_lock lock(mu_);
    const auto& s = require(id);
    if (s.current_page != Page::P3) {
        fail(ErrorCode::InvalidState, "consent is recorded on P3, session is on " + to_string(s.current_page));
    }
    Event e{EventKind::ConsentRecorded, id, format_rfc3339(now_ms()), s.current_page, granted, {}, {}};
    return commit(e);
}

Session Engine::submit_sentiment(const std::string& id, std::string_view word) {
    std::unique_lock lock(mu_);
    const auto& s = require(id);
    if (!s.consent) fail(ErrorCode::ConsentRequired, "consent is required before submitting a sentiment");
    if (s.current_page != Page::P4) {
        fail(ErrorCode::InvalidState, "sentiment is submitted on P4, session is on " + to_string(s.current_page));
    }
    if (s.sentiment_word) fail(ErrorCode::AlreadySubmitted, "this session already submitted a word");
    Event e{EventKind::SentimentSubmitted, id, format_rfc3339(now_ms()), s.current_page, false,
            normalize_word(word), {}};
    return commit(e);
}

Session Engine::cast_ballot(const std::string& id, const std::set<TechOption>& selections) {
    std::unique_lock lock(mu_);
    const auto& s = require(id);
    if (!s.consent) fail(ErrorCode::ConsentRequired, "consent is required before voting");
    if (s.current_page != Page::P5) {
        fail(ErrorCode::InvalidState, "votes are cast on P5, session is on " + to_string(s.current_page));
    }
    if (selections.empty() || selections.size() > kMaxSelections) {
        fail(ErrorCode::Validation, "a ballot selects between 1 and 3 technologies");
    }
    Event e{EventKind::BallotCast, id, format_rfc3339(now_ms()), s.current_page, false, {}, selections};
    return commit(e);
}

void Engine::apply(const Event& e) {
    std::unique_lock lock(mu_);
    apply_locked(e);
}

void Engine::apply_locked(const Event& e) {
    if (e.kind == EventKind::SessionCreated) {
        Session s;
        s.id = e.session_id;
        s.created_at = e.at;
        sessions_[s.id] = std::move(s);
        return;
    }
    auto& s = require(e.session_id);
    switch (e.kind) {
    case EventKind::SessionCreated: break;
    case EventKind::PageChanged: s.current_page = e.page; break;
    case EventKind::ConsentRecorded: s.consent = e.granted; break;
    case EventKind::SentimentSubmitted:
        if (!s.sentiment_word) ++word_counts_[e.word];
        s.sentiment_word = e.word;
        break;
    case EventKind::BallotCast: s.ballot = Ballot{e.selections, e.at}; break;
    }
}

SentimentAggregate Engine::aggregate_sentiment(std::size_t k) const {
    std::shared_lock lock(mu_);
    SentimentAggregate a;
    a.counts = word_counts_;
    for (const auto& [w, n] : a.counts) a.total_submissions += n;
    std::vector<std::pair<std::string, std::uint64_t>> ranked(a.counts.begin(), a.counts.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
        if (x.second != y.second) return x.second > y.second;
        return x.first < y.first;
    });
    ranked.resize(std::min(k, ranked.size()));
    a.top_k = std::move(ranked);
    return a;
}

Tally Engine::tally() const {
    std::shared_lock lock(mu_);
    Tally t;
    for (auto opt : kAllOptions) t.counts[opt] = 0;
    for (const auto& [id, s] : sessions_) {
        if (!s.ballot) continue;
        ++t.total_ballots;
        for (auto opt : s.ballot->selections) ++t.counts[opt];
    }
    return t;
}

std::optional<Session> Engine::find(const std::string& id) const {
    std::shared_lock lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return std::nullopt;
    return it->second;
}

Session Engine::get(const std::string& id) const {
    auto s = find(id);
    if (!s) fail(ErrorCode::NotFound, "unknown session '" + id + "'");
    return *s;
}

std::vector<Session> Engine::sessions() const {
    std::shared_lock lock(mu_);
    std::vector<Session> out;
    out.reserve(sessions_.size());
    for (const auto& [id, s] : sessions_) out.push_back(s);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
}

}  // namespace qfi::engage
