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

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "common.hpp"
#include "qsim.hpp"

namespace qfi::devices {

enum class Architecture { ClassicalSimulator, TrappedIon, Superconducting, NeutralAtomAnalog };
enum class ExecutionModel { Statevector, GateNoisy, AnalogBlockade };
enum class EntropyClass { Computed, Measured };
enum class Status { QUEUED, RUNNING, COMPLETED, FAILED };

const char* to_string(Architecture a);
const char* to_string(ExecutionModel m);
const char* to_string(EntropyClass e);
const char* to_string(Status s);
Architecture parse_architecture(const std::string& s);
ExecutionModel parse_execution_model(const std::string& s);
EntropyClass parse_entropy_class(const std::string& s);
Status parse_status(const std::string& s);

struct DeviceSpec {
    std::string id;
    std::string display_name;
    Architecture architecture = Architecture::ClassicalSimulator;
    ExecutionModel execution_model = ExecutionModel::Statevector;
    unsigned max_qubits = 1;
    double gate_error = 0.0;
    double readout_error = 0.0;
    double latency_ms = 0.0;
    double power_kw = 0.0;
    bool available = true;
    EntropyClass entropy_class = EntropyClass::Computed;
    // Descriptive only; never used for ranking or dispatch.
    std::optional<double> coherence_time_us;
    std::optional<std::string> connectivity;
};

json to_json(const DeviceSpec& d);

using Catalog = std::vector<DeviceSpec>;

/// Parses a YAML catalog document (top-level `devices:` sequence, one mapping
/// per device, keys named after the DeviceSpec fields). Throws Config naming
/// the offending entry.
Catalog load_catalog(const std::string& yaml_text);
Catalog load_catalog_file(const std::string& path);

const DeviceSpec& find_device(const Catalog& catalog, const std::string& id);

struct AnalogParams {
    unsigned n_atoms = 8;
    double excitation_bias = 0.5;
};

struct ExecutionRequest {
    std::string device_id;
    std::variant<qsim::Circuit, AnalogParams> payload;
    std::uint64_t shots = 1;
    std::uint64_t seed = 0;
};

struct ExecutionRecord {
    std::string execution_id;
    std::string device_id;
    Status status = Status::QUEUED;
    TimePoint submitted_at{};
    std::optional<TimePoint> completed_at;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    EntropyClass entropy_class = EntropyClass::Computed;
    std::optional<qsim::MeasurementRecord> result;  // iff COMPLETED
    std::optional<std::string> failure_reason;      // iff FAILED
    Digest provenance_digest{};
};

/// SHA-256 over the canonical document {counts, device_id, execution_id, seed, shots}.
/// Timestamps are deliberately outside the preimage.
Digest compute_provenance_digest(const ExecutionRecord& rec);

/// Serialised form. Shot order is kept in `samples` (bits packed MSB-first,
/// shot-major, hex) so entropy extraction works from a persisted record.
json to_json(const ExecutionRecord& rec);
ExecutionRecord execution_from_json(const json& doc);

struct ExecuteOptions {
    /// Fixed id (reproducible digests); a random UUIDv4 otherwise.
    std::optional<std::string> execution_id;
    /// Fixed submission time; wall clock otherwise.
    std::optional<TimePoint> submitted_at;
    /// Sleep for latency_ms instead of only stamping it.
    bool real_latency = false;
    /// Observes every status transition, including the terminal one.
    std::function<void(const ExecutionRecord&)> on_transition;
};

/// Runs a request on the emulation that matches the device's architecture.
/// Throws NotFound, Unavailable, Capacity or InvalidRequest before any record
/// exists; a failure while RUNNING yields a FAILED record instead.
ExecutionRecord execute(const ExecutionRequest& request, const Catalog& catalog,
                        const ExecuteOptions& options = {});

enum class Metric { MaxQubits, GateError, LatencyMs, PowerKw };
Metric parse_metric(const std::string& s);

std::vector<std::pair<std::string, double>> compare_devices(const Catalog& catalog, Metric metric);

}  // namespace qfi::devices
