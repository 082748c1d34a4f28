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

/// The participant-facing service: composes sessions, device execution,
/// entropy conditioning, signing and the provenance ledger over file-backed
/// event logs in the data directory:
///
///   sessions.log    session lifecycle plus per-session keyset events
///   sentiment.log   accepted sentiment words
///   ballots.log     accepted ballots (latest per session wins)
///   executions.log  every execution status transition
///   ledger.log      hash chain of execution records and artifacts
///
/// All state is rebuilt from these files at construction.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "config.hpp"
#include "devices.hpp"
#include "engage.hpp"
#include "entropy.hpp"
#include "impact.hpp"
#include "ledger.hpp"
#include "pqsig.hpp"
#include "store.hpp"

namespace qfi::gateway {

/// HTTP status for an error code, and the machine-readable code string.
int http_status(ErrorCode code);

class Gateway {
  public:
    explicit Gateway(config::Environment env);

    json create_session();
    json get_session(const std::string& id) const;
    json change_page(const std::string& id, const json& body);
    json record_consent(const std::string& id, const json& body);
    json submit_sentiment(const std::string& id, const json& body);
    json cast_vote(const std::string& id, const json& body);

    json sentiment_aggregate(std::size_t k) const;
    json vote_tally() const;
    json list_devices(const std::optional<std::string>& region) const;
    json vulnerability() const;

    json execute(const std::string& session_id, const json& body);
    json get_execution(const std::string& execution_id) const;
    json generate_artifact(const std::string& session_id, const json& body);
    json get_artifact(const std::string& artifact_id) const;
    json verify_artifact(const std::string& artifact_id) const;

    json ledger_entries(std::uint64_t offset, std::uint64_t limit) const;
    json ledger_verify();

    const config::Environment& environment() const noexcept { return env_; }

  private:
    struct OwnedExecution {
        std::string session_id;
        devices::ExecutionRecord record;
    };
    struct SessionKeys {
        entropy::Seed256 seed;
        pqsig::MerkleLamportKeyset keyset;
    };

    void replay();
    void persist_engage_event(const engage::Event& e);
    std::mutex& session_mutex(const std::string& id);
    engage::Session require_stage(const std::string& id, engage::Page a, engage::Page b) const;

    config::Environment env_;
    store::EventLog sessions_log_;
    store::EventLog sentiment_log_;
    store::EventLog ballots_log_;
    store::EventLog executions_log_;
    ledger::Ledger ledger_;
    engage::Engine engine_;

    mutable std::shared_mutex state_mu_;
    std::unordered_map<std::string, OwnedExecution> executions_;
    std::unordered_map<std::string, SessionKeys> keys_;
    std::map<std::string, std::string> artifacts_;  // artifact_id -> canonical document

    std::mutex session_mu_guard_;
    std::unordered_map<std::string, std::unique_ptr<std::mutex>> session_mu_;
};

}  // namespace qfi::gateway
