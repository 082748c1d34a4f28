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

#include "gateway.hpp"

#include <filesystem>

#include "threatmodel.hpp"

namespace qfi::gateway {

namespace fs = std::filesystem;

int http_status(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::ConsentRequired:
    case ErrorCode::PageForbidden: return 403;
    case ErrorCode::InvalidState:
    case ErrorCode::AlreadySubmitted:
    case ErrorCode::Unavailable:
    case ErrorCode::KeyExhausted:
    case ErrorCode::ReuseForbidden: return 409;
    case ErrorCode::InvalidTransition:
    case ErrorCode::Validation:
    case ErrorCode::UnknownRegion:
    case ErrorCode::Capacity:
    case ErrorCode::InvalidRequest:
    case ErrorCode::InvalidGate:
    case ErrorCode::HeightOutOfRange:
    case ErrorCode::TooShort:
    case ErrorCode::InsufficientEntropy: return 422;
    case ErrorCode::ChainCorrupt: return 503;
    case ErrorCode::Config:
    case ErrorCode::Io: return 500;
    }
    return 500;
}

namespace {

std::string data_file(const config::Config& cfg, const char* name) {
    return (fs::path(cfg.data_dir) / name).string();
}

const std::string& ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorCode::Io, "cannot create data directory " + dir + ": " + ec.message());
    return dir;
}

template <typename T>
T field(const json& body, const char* key) {
    if (!body.is_object() || !body.contains(key)) fail(ErrorCode::Validation, std::string("missing field '") + key + "'");
    try {
        return body.at(key).get<T>();
    } catch (const json::exception&) {
        fail(ErrorCode::Validation, std::string("field '") + key + "' has the wrong type");
    }
}

template <typename T>
T field_or(const json& body, const char* key, T fallback) {
    if (!body.is_object() || !body.contains(key) || body.at(key).is_null()) return fallback;
    return field<T>(body, key);
}

// Integers only; a negative value must not wrap around into a huge unsigned one.
std::uint64_t unsigned_or(const json& body, const char* key, std::uint64_t fallback) {
    if (!body.is_object() || !body.contains(key) || body.at(key).is_null()) return fallback;
    const auto& v = body.at(key);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        fail(ErrorCode::Validation, std::string("field '") + key + "' must be a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

std::uint64_t positive(const json& body, const char* key, std::uint64_t fallback) {
    const auto v = unsigned_or(body, key, fallback);
    if (v == 0) fail(ErrorCode::Validation, std::string("field '") + key + "' must be positive");
    return v;
}

json keyset_created(const std::string& session_id, const entropy::Seed256& seed, unsigned height) {
    return {{"type", "keyset_created"},
            {"session_id", session_id},
            {"seed", to_hex(seed.bytes)},
            {"source_execution", seed.source_execution},
            {"entropy_class", devices::to_string(seed.entropy_class)},
            {"height", height}};
}

}  // namespace

Gateway::Gateway(config::Environment env)
    : env_(std::move(env)),
      sessions_log_(data_file(env_.config, "sessions.log")),
      sentiment_log_(data_file(env_.config, "sentiment.log")),
      ballots_log_(data_file(env_.config, "ballots.log")),
      executions_log_(data_file(env_.config, "executions.log")),
      ledger_((ensure_dir(env_.config.data_dir), data_file(env_.config, "ledger.log"))),
      engine_([this](const engage::Event& e) { persist_engage_event(e); }) {
    replay();
}

void Gateway::persist_engage_event(const engage::Event& e) {
    switch (e.kind) {
    case engage::EventKind::SentimentSubmitted: sentiment_log_.append(engage::to_json(e)); break;
    case engage::EventKind::BallotCast: ballots_log_.append(engage::to_json(e)); break;
    default: sessions_log_.append(engage::to_json(e)); break;
    }
}

void Gateway::replay() {
    for (const auto& doc : sessions_log_.replay()) {
        if (engage::is_engage_event(doc)) {
            engine_.apply(engage::event_from_json(doc));
            continue;
        }
        const auto type = doc.value("type", std::string());
        const auto sid = doc.value("session_id", std::string());
        if (type == "keyset_created") {
            entropy::Seed256 seed{from_hex_fixed<32>(doc.at("seed").get<std::string>()),
                                  doc.at("source_execution").get<std::string>(),
                                  devices::parse_entropy_class(doc.at("entropy_class").get<std::string>())};
            auto ks = pqsig::keygen(seed, doc.at("height").get<unsigned>());
            keys_.insert_or_assign(sid, SessionKeys{seed, std::move(ks)});
        } else if (type == "leaf_used") {
            pqsig::mark_used(keys_.at(sid).keyset, doc.at("leaf_index").get<std::size_t>());
        } else {
            fail(ErrorCode::Io, "unknown record type '" + type + "' in " + sessions_log_.path());
        }
    }
    for (const auto& doc : sentiment_log_.replay()) engine_.apply(engage::event_from_json(doc));
    for (const auto& doc : ballots_log_.replay()) engine_.apply(engage::event_from_json(doc));
    for (const auto& doc : executions_log_.replay()) {
        auto rec = devices::execution_from_json(doc.at("record"));
        const auto id = rec.execution_id;
        executions_.insert_or_assign(id, OwnedExecution{doc.at("session_id").get<std::string>(), std::move(rec)});
    }
    const auto n = ledger_.size();
    for (const auto& e : ledger_.list_entries(0, n)) {
        if (e.payload_kind != ledger::PayloadKind::Artifact) continue;
        auto doc = json::parse(e.payload, nullptr, false);
        if (doc.is_object() && doc.contains("artifact_id") && doc["artifact_id"].is_string()) {
            artifacts_[doc["artifact_id"].get<std::string>()] = e.payload;
        }
    }
}

std::mutex& Gateway::session_mutex(const std::string& id) {
    std::lock_guard lock(session_mu_guard_);
    auto& slot = session_mu_[id];
    if (!slot) slot = std::make_unique<std::mutex>();
    return *slot;
}

engage::Session Gateway::require_stage(const std::string& id, engage::Page a, engage::Page b) const {
    auto s = engine_.get(id);
    if (!s.consent) fail(ErrorCode::ConsentRequired, "consent is required");
    if (s.current_page < a || s.current_page > b) {
        fail(ErrorCode::PageForbidden, "not permitted on " + engage::to_string(s.current_page));
    }
    return s;
}

// ---- sessions ----------------------------------------------------------------

json Gateway::create_session() {
    auto s = engine_.create_session();
    return {{"session_id", s.id}, {"page", engage::to_string(s.current_page)}, {"consent", s.consent}};
}

json Gateway::get_session(const std::string& id) const { return engage::to_json(engine_.get(id)); }

json Gateway::change_page(const std::string& id, const json& body) {
    return engage::to_json(engine_.advance_page(id, engage::parse_page(field<std::string>(body, "target"))));
}

json Gateway::record_consent(const std::string& id, const json& body) {
    return engage::to_json(engine_.record_consent(id, field<bool>(body, "granted")));
}

json Gateway::submit_sentiment(const std::string& id, const json& body) {
    return engage::to_json(engine_.submit_sentiment(id, field<std::string>(body, "word")));
}

json Gateway::cast_vote(const std::string& id, const json& body) {
    const auto raw = field<std::vector<std::string>>(body, "selections");
    std::set<engage::TechOption> selections;
    for (const auto& s : raw) selections.insert(engage::parse_tech_option(s));
    return engage::to_json(engine_.cast_ballot(id, selections));
}

json Gateway::sentiment_aggregate(std::size_t k) const { return engage::to_json(engine_.aggregate_sentiment(k)); }

json Gateway::vote_tally() const { return engage::to_json(engine_.tally()); }

// ---- catalog -----------------------------------------------------------------

json Gateway::list_devices(const std::optional<std::string>& region_code) const {
    const auto& region = impact::find_region(env_.regions, region_code.value_or(env_.config.default_region));
    const double duration = env_.config.default_duration_s;
    json rows = json::array();
    for (const auto& [id, est] : impact::compare_impact(env_.catalog, duration, region)) {
        auto d = devices::to_json(devices::find_device(env_.catalog, id));
        d["impact"] = impact::to_json(est);
        rows.push_back(std::move(d));
    }
    return {{"region", {{"region_code", region.region_code}, {"grams_co2_per_kwh", region.grams_co2_per_kwh}}},
            {"duration_s", duration},
            {"devices", rows}};
}

json Gateway::vulnerability() const {
    json rows = json::array();
    for (const auto& p : threatmodel::vulnerability_index()) rows.push_back(threatmodel::to_json(p));
    return {{"primitives", rows}};
}

// ---- execution and artifacts -------------------------------------------------

json Gateway::execute(const std::string& session_id, const json& body) {
    std::lock_guard session_lock(session_mutex(session_id));
    require_stage(session_id, engage::Page::P6, engage::Page::P7);

    const auto device_id = field<std::string>(body, "device_id");
    const auto shots = positive(body, "shots", env_.config.default_shots);
    const auto width = positive(body, "n_qubits", env_.config.default_qubits);
    const auto seed = unsigned_or(body, "seed", 0);
    const bool seeded = body.is_object() && body.contains("seed") && !body["seed"].is_null();
    const auto& device = devices::find_device(env_.catalog, device_id);
    if (width > qsim::kMaxQubits) fail(ErrorCode::Capacity, "at most 20 qubits can be emulated");

    devices::ExecutionRequest req;
    req.device_id = device_id;
    req.shots = shots;
    req.seed = seeded ? seed : os_random_u64();
    if (device.execution_model == devices::ExecutionModel::AnalogBlockade) {
        req.payload = devices::AnalogParams{static_cast<unsigned>(width),
                                            field_or<double>(body, "excitation_bias", env_.config.default_excitation_bias)};
    } else {
        req.payload = qsim::Circuit::hadamard_layer(static_cast<unsigned>(width));
    }

    devices::ExecuteOptions opts;
    opts.real_latency = env_.config.real_latency;
    opts.on_transition = [&](const devices::ExecutionRecord& rec) {
        executions_log_.append({{"session_id", session_id}, {"record", devices::to_json(rec)}});
    };
    auto rec = devices::execute(req, env_.catalog, opts);
    auto doc = devices::to_json(rec);
    {
        std::unique_lock lock(state_mu_);
        executions_.insert_or_assign(rec.execution_id, OwnedExecution{session_id, rec});
    }
    ledger_.append(canonical(doc), ledger::PayloadKind::ExecutionRecord);
    return doc;
}

json Gateway::get_execution(const std::string& execution_id) const {
    std::shared_lock lock(state_mu_);
    auto it = executions_.find(execution_id);
    if (it == executions_.end()) fail(ErrorCode::NotFound, "unknown execution '" + execution_id + "'");
    return devices::to_json(it->second.record);
}

json Gateway::generate_artifact(const std::string& session_id, const json& body) {
    std::lock_guard session_lock(session_mutex(session_id));
    require_stage(session_id, engage::Page::P7, engage::Page::P7);
    const auto execution_id = field<std::string>(body, "execution_id");

    devices::ExecutionRecord rec;
    {
        std::shared_lock lock(state_mu_);
        auto it = executions_.find(execution_id);
        if (it == executions_.end() || it->second.session_id != session_id) {
            fail(ErrorCode::NotFound, "session has no execution '" + execution_id + "'");
        }
        rec = it->second.record;
    }
    if (rec.status != devices::Status::COMPLETED || !rec.result) {
        fail(ErrorCode::InvalidState, "execution " + execution_id + " did not complete");
    }

    const auto raw = entropy::extract_bits(*rec.result, rec.execution_id);
    const auto seed = entropy::condition(raw, rec.device_id, rec.execution_id, rec.entropy_class,
                                         env_.config.min_debiased_bits);

    pqsig::Artifact artifact;
    {
        std::unique_lock lock(state_mu_);
        auto it = keys_.find(session_id);
        if (it == keys_.end()) {
            auto ks = pqsig::keygen(seed, env_.config.default_height);
            sessions_log_.append(keyset_created(session_id, seed, env_.config.default_height));
            it = keys_.emplace(session_id, SessionKeys{seed, std::move(ks)}).first;
        }
        auto& keyset = it->second.keyset;
        if (keyset.next_index() >= keyset.capacity()) {
            fail(ErrorCode::KeyExhausted, "all " + std::to_string(keyset.capacity()) +
                                              " one-time keys of this session are used");
        }
        // The leaf is burned on disk before its signature can leave the process.
        sessions_log_.append({{"type", "leaf_used"}, {"session_id", session_id}, {"leaf_index", keyset.next_index()}});
        artifact = pqsig::sign_artifact(session_id, rec.device_id, rec, seed, keyset);
    }

    auto doc = pqsig::to_json(artifact);
    auto bytes = canonical(doc);
    ledger_.append(bytes, ledger::PayloadKind::Artifact);
    {
        std::unique_lock lock(state_mu_);
        artifacts_[artifact.artifact_id] = bytes;
    }
    return doc;
}

json Gateway::get_artifact(const std::string& artifact_id) const {
    std::shared_lock lock(state_mu_);
    auto it = artifacts_.find(artifact_id);
    if (it == artifacts_.end()) fail(ErrorCode::NotFound, "unknown artifact '" + artifact_id + "'");
    return json::parse(it->second);
}

json Gateway::verify_artifact(const std::string& artifact_id) const {
    std::string bytes;
    {
        std::shared_lock lock(state_mu_);
        auto it = artifacts_.find(artifact_id);
        if (it == artifacts_.end()) fail(ErrorCode::NotFound, "unknown artifact '" + artifact_id + "'");
        bytes = it->second;
    }
    bool valid = false;
    try {
        valid = pqsig::verify_artifact(pqsig::artifact_from_json(json::parse(bytes)));
    } catch (const std::exception&) {
        valid = false;
    }
    return {{"artifact_id", artifact_id}, {"valid", valid}};
}

// ---- ledger --------------------------------------------------------------------

json Gateway::ledger_entries(std::uint64_t offset, std::uint64_t limit) const {
    json rows = json::array();
    for (const auto& e : ledger_.list_entries(offset, limit)) rows.push_back(ledger::to_json(e));
    return {{"length", ledger_.size()}, {"offset", offset}, {"entries", rows}};
}

json Gateway::ledger_verify() { return ledger::to_json(ledger_.verify_chain()); }

}  // namespace qfi::gateway
