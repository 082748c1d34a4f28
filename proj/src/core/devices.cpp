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

#include "devices.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

namespace qfi::devices {

const char* to_string(Architecture a) {
    switch (a) {
    case Architecture::ClassicalSimulator: return "ClassicalSimulator";
    case Architecture::TrappedIon: return "TrappedIon";
    case Architecture::Superconducting: return "Superconducting";
    case Architecture::NeutralAtomAnalog: return "NeutralAtomAnalog";
    }
    return "?";
}

const char* to_string(ExecutionModel m) {
    switch (m) {
    case ExecutionModel::Statevector: return "Statevector";
    case ExecutionModel::GateNoisy: return "GateNoisy";
    case ExecutionModel::AnalogBlockade: return "AnalogBlockade";
    }
    return "?";
}

const char* to_string(EntropyClass e) { return e == EntropyClass::Computed ? "Computed" : "Measured"; }

const char* to_string(Status s) {
    switch (s) {
    case Status::QUEUED: return "QUEUED";
    case Status::RUNNING: return "RUNNING";
    case Status::COMPLETED: return "COMPLETED";
    case Status::FAILED: return "FAILED";
    }
    return "?";
}

namespace {
template <typename E, std::size_t N>
E parse_enum(const std::string& s, const E (&values)[N], const char* what) {
    for (auto v : values) {
        if (s == to_string(v)) return v;
    }
    fail(ErrorCode::Validation, std::string("unknown ") + what + " '" + s + "'");
}
}  // namespace

Architecture parse_architecture(const std::string& s) {
    static constexpr Architecture kAll[] = {Architecture::ClassicalSimulator, Architecture::TrappedIon,
                                            Architecture::Superconducting, Architecture::NeutralAtomAnalog};
    return parse_enum(s, kAll, "architecture");
}

ExecutionModel parse_execution_model(const std::string& s) {
    static constexpr ExecutionModel kAll[] = {ExecutionModel::Statevector, ExecutionModel::GateNoisy,
                                              ExecutionModel::AnalogBlockade};
    return parse_enum(s, kAll, "execution_model");
}

EntropyClass parse_entropy_class(const std::string& s) {
    static constexpr EntropyClass kAll[] = {EntropyClass::Computed, EntropyClass::Measured};
    return parse_enum(s, kAll, "entropy_class");
}

Status parse_status(const std::string& s) {
    static constexpr Status kAll[] = {Status::QUEUED, Status::RUNNING, Status::COMPLETED, Status::FAILED};
    return parse_enum(s, kAll, "status");
}

json to_json(const DeviceSpec& d) {
    json j = {{"id", d.id},
              {"display_name", d.display_name},
              {"architecture", to_string(d.architecture)},
              {"execution_model", to_string(d.execution_model)},
              {"max_qubits", d.max_qubits},
              {"gate_error", d.gate_error},
              {"readout_error", d.readout_error},
              {"latency_ms", d.latency_ms},
              {"power_kw", d.power_kw},
              {"available", d.available},
              {"entropy_class", to_string(d.entropy_class)}};
    if (d.coherence_time_us) j["coherence_time_us"] = *d.coherence_time_us;
    if (d.connectivity) j["connectivity"] = *d.connectivity;
    return j;
}

namespace {

ExecutionModel expected_model(Architecture a) {
    switch (a) {
    case Architecture::ClassicalSimulator: return ExecutionModel::Statevector;
    case Architecture::TrappedIon:
    case Architecture::Superconducting: return ExecutionModel::GateNoisy;
    case Architecture::NeutralAtomAnalog: return ExecutionModel::AnalogBlockade;
    }
    return ExecutionModel::Statevector;
}

DeviceSpec parse_device(const YAML::Node& node, std::size_t position) {
    const std::string where = node["id"] && node["id"].IsScalar()
                                  ? "device '" + node["id"].as<std::string>() + "'"
                                  : "device #" + std::to_string(position);
    auto bad = [&](const std::string& why) -> void { fail(ErrorCode::Config, where + ": " + why); };
    if (!node.IsMap()) bad("entry is not a mapping");

    auto required = [&](const char* key) {
        auto v = node[key];
        if (!v || !v.IsScalar()) bad(std::string("missing field '") + key + "'");
        return v;
    };

    DeviceSpec d;
    try {
        d.id = required("id").as<std::string>();
        d.display_name = required("display_name").as<std::string>();
        d.architecture = parse_architecture(required("architecture").as<std::string>());
        d.execution_model = parse_execution_model(required("execution_model").as<std::string>());
        auto max_qubits = required("max_qubits").as<long long>();
        if (max_qubits <= 0) bad("max_qubits must be positive");
        d.max_qubits = static_cast<unsigned>(max_qubits);
        d.gate_error = required("gate_error").as<double>();
        d.readout_error = required("readout_error").as<double>();
        d.latency_ms = required("latency_ms").as<double>();
        d.power_kw = required("power_kw").as<double>();
        d.available = required("available").as<bool>();
        d.entropy_class = parse_entropy_class(required("entropy_class").as<std::string>());
        if (auto v = node["coherence_time_us"]) d.coherence_time_us = v.as<double>();
        if (auto v = node["connectivity"]) d.connectivity = v.as<std::string>();
    } catch (const YAML::Exception& e) {
        bad(std::string("malformed value (") + e.what() + ")");
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Config) throw;
        bad(e.what());
    }

    if (d.id.empty()) bad("id must not be empty");
    auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!in_unit(d.gate_error)) bad("gate_error must lie in [0,1]");
    if (!in_unit(d.readout_error)) bad("readout_error must lie in [0,1]");
    if (!(d.power_kw >= 0.0)) bad("power_kw must be nonnegative");
    if (!(d.latency_ms >= 0.0)) bad("latency_ms must be nonnegative");
    const bool simulator = d.architecture == Architecture::ClassicalSimulator;
    if (simulator != (d.entropy_class == EntropyClass::Computed)) {
        bad("entropy_class must be Computed exactly for ClassicalSimulator devices");
    }
    if (d.execution_model != expected_model(d.architecture)) {
        bad(std::string("execution_model ") + to_string(d.execution_model) + " does not match architecture " +
            to_string(d.architecture));
    }
    return d;
}

}  // namespace

Catalog load_catalog(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        fail(ErrorCode::Config, std::string("catalog does not parse: ") + e.what());
    }
    auto list = root["devices"];
    if (!list || !list.IsSequence()) fail(ErrorCode::Config, "catalog needs a top-level 'devices' sequence");

    Catalog out;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < list.size(); ++i) {
        auto d = parse_device(list[i], i);
        if (!seen.insert(d.id).second) fail(ErrorCode::Config, "device '" + d.id + "': duplicate id");
        out.push_back(std::move(d));
    }
    return out;
}

Catalog load_catalog_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot open catalog " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_catalog(ss.str());
}

const DeviceSpec& find_device(const Catalog& catalog, const std::string& id) {
    auto it = std::find_if(catalog.begin(), catalog.end(), [&](const DeviceSpec& d) { return d.id == id; });
    if (it == catalog.end()) fail(ErrorCode::NotFound, "unknown device '" + id + "'");
    return *it;
}

namespace {

json counts_json(const qsim::MeasurementRecord& m) {
    json c = json::object();
    for (const auto& [k, v] : m.counts()) c[k] = v;
    return c;
}

std::string pack_samples(const qsim::MeasurementRecord& m) {
    std::vector<std::uint8_t> bits;
    bits.reserve(m.outcomes.size() * m.n_qubits);
    for (auto o : m.outcomes) {
        for (unsigned q = 0; q < m.n_qubits; ++q) bits.push_back((o >> (m.n_qubits - 1 - q)) & 1u);
    }
    return to_hex(pack_bits(bits));
}

}  // namespace

Digest compute_provenance_digest(const ExecutionRecord& rec) {
    json pre = {{"execution_id", rec.execution_id},
                {"device_id", rec.device_id},
                {"shots", rec.shots},
                {"seed", rec.seed},
                {"counts", rec.result ? counts_json(*rec.result) : json::object()}};
    return sha256(canonical(pre));
}

json to_json(const ExecutionRecord& rec) {
    json j = {{"execution_id", rec.execution_id},
              {"device_id", rec.device_id},
              {"status", to_string(rec.status)},
              {"submitted_at", format_rfc3339(rec.submitted_at)},
              {"shots", rec.shots},
              {"seed", rec.seed},
              {"entropy_class", to_string(rec.entropy_class)},
              {"provenance_digest", to_hex(rec.provenance_digest)}};
    if (rec.completed_at) j["completed_at"] = format_rfc3339(*rec.completed_at);
    if (rec.result) {
        j["n_qubits"] = rec.result->n_qubits;
        j["counts"] = counts_json(*rec.result);
        j["samples"] = pack_samples(*rec.result);
    }
    if (rec.failure_reason) j["failure_reason"] = *rec.failure_reason;
    return j;
}

ExecutionRecord execution_from_json(const json& doc) {
    try {
        ExecutionRecord rec;
        rec.execution_id = doc.at("execution_id").get<std::string>();
        rec.device_id = doc.at("device_id").get<std::string>();
        rec.status = parse_status(doc.at("status").get<std::string>());
        rec.submitted_at = parse_rfc3339(doc.at("submitted_at").get<std::string>());
        if (doc.contains("completed_at")) rec.completed_at = parse_rfc3339(doc["completed_at"].get<std::string>());
        rec.shots = doc.at("shots").get<std::uint64_t>();
        rec.seed = doc.at("seed").get<std::uint64_t>();
        rec.entropy_class = parse_entropy_class(doc.at("entropy_class").get<std::string>());
        rec.provenance_digest = from_hex_fixed<32>(doc.at("provenance_digest").get<std::string>());
        if (doc.contains("failure_reason")) rec.failure_reason = doc["failure_reason"].get<std::string>();
        if (doc.contains("samples")) {
            qsim::MeasurementRecord m;
            m.n_qubits = doc.at("n_qubits").get<unsigned>();
            m.shots = rec.shots;
            m.seed = rec.seed;
            if (m.n_qubits == 0 || m.n_qubits > 32) fail(ErrorCode::Validation, "bad n_qubits in record");
            auto packed = from_hex(doc["samples"].get<std::string>());
            if (packed.size() * 8 < m.shots * m.n_qubits) fail(ErrorCode::Validation, "samples truncated");
            std::size_t bit = 0;
            for (std::uint64_t s = 0; s < m.shots; ++s) {
                std::uint32_t o = 0;
                for (unsigned q = 0; q < m.n_qubits; ++q, ++bit) {
                    o = (o << 1) | ((packed[bit / 8] >> (7 - bit % 8)) & 1u);
                }
                m.outcomes.push_back(o);
            }
            rec.result = std::move(m);
        }
        return rec;
    } catch (const json::exception& e) {
        fail(ErrorCode::Validation, std::string("malformed execution record: ") + e.what());
    }
}

namespace {

void check_request(const ExecutionRequest& request, const DeviceSpec& device) {
    if (!device.available) fail(ErrorCode::Unavailable, "device '" + device.id + "' is unavailable");
    if (request.shots == 0) fail(ErrorCode::InvalidRequest, "shots must be at least 1");

    const bool analog = std::holds_alternative<AnalogParams>(request.payload);
    if (analog != (device.execution_model == ExecutionModel::AnalogBlockade)) {
        fail(ErrorCode::InvalidRequest, std::string("payload kind does not match execution model ") +
                                            to_string(device.execution_model) + " of '" + device.id + "'");
    }
    const unsigned width = analog ? std::get<AnalogParams>(request.payload).n_atoms
                                  : std::get<qsim::Circuit>(request.payload).n_qubits;
    if (width > device.max_qubits) {
        fail(ErrorCode::Capacity, "'" + device.id + "' supports at most " + std::to_string(device.max_qubits) +
                                      " qubits, requested " + std::to_string(width));
    }
    if (analog) {
        const auto& p = std::get<AnalogParams>(request.payload);
        if (p.n_atoms == 0 || p.n_atoms > qsim::kMaxAtoms) fail(ErrorCode::Capacity, "analog register too large");
        if (!(p.excitation_bias > 0.0 && p.excitation_bias < 1.0)) {
            fail(ErrorCode::InvalidRequest, "excitation_bias must lie in (0,1)");
        }
    } else {
        qsim::validate_circuit(std::get<qsim::Circuit>(request.payload));
    }
}

qsim::MeasurementRecord run_payload(const ExecutionRequest& request, const DeviceSpec& device) {
    switch (device.architecture) {
    case Architecture::ClassicalSimulator:
        return qsim::sample(std::get<qsim::Circuit>(request.payload), request.shots, request.seed);
    case Architecture::TrappedIon:
    case Architecture::Superconducting:
        return qsim::sample(std::get<qsim::Circuit>(request.payload), request.shots, request.seed,
                            {device.gate_error, device.readout_error});
    case Architecture::NeutralAtomAnalog: {
        const auto& p = std::get<AnalogParams>(request.payload);
        return qsim::run_analog_blockade(p.n_atoms, request.shots, request.seed, p.excitation_bias);
    }
    }
    fail(ErrorCode::InvalidRequest, "unsupported architecture");
}

}  // namespace

ExecutionRecord execute(const ExecutionRequest& request, const Catalog& catalog, const ExecuteOptions& options) {
    const auto& device = find_device(catalog, request.device_id);
    check_request(request, device);

    ExecutionRecord rec;
    rec.execution_id = options.execution_id.value_or(uuid_v4());
    rec.device_id = device.id;
    rec.shots = request.shots;
    rec.seed = request.seed;
    rec.entropy_class = device.entropy_class;
    rec.submitted_at = options.submitted_at.value_or(now_ms());
    rec.provenance_digest = compute_provenance_digest(rec);
    auto notify = [&] {
        if (options.on_transition) options.on_transition(rec);
    };
    notify();

    rec.status = Status::RUNNING;
    notify();

    const auto latency = std::chrono::milliseconds(static_cast<long long>(std::ceil(device.latency_ms)));
    try {
        rec.result = run_payload(request, device);
        if (options.real_latency) std::this_thread::sleep_for(latency);
        rec.status = Status::COMPLETED;
    } catch (const std::exception& e) {
        rec.result.reset();
        rec.status = Status::FAILED;
        rec.failure_reason = e.what();
    }

    const TimePoint earliest = rec.submitted_at + latency;
    rec.completed_at = options.submitted_at ? earliest : std::max(earliest, now_ms());
    rec.provenance_digest = compute_provenance_digest(rec);
    notify();
    return rec;
}

Metric parse_metric(const std::string& s) {
    if (s == "max_qubits") return Metric::MaxQubits;
    if (s == "gate_error") return Metric::GateError;
    if (s == "latency_ms") return Metric::LatencyMs;
    if (s == "power_kw") return Metric::PowerKw;
    fail(ErrorCode::Validation, "unknown metric '" + s + "'");
}

std::vector<std::pair<std::string, double>> compare_devices(const Catalog& catalog, Metric metric) {
    std::vector<std::pair<std::string, double>> rows;
    rows.reserve(catalog.size());
    for (const auto& d : catalog) {
        double v = 0.0;
        switch (metric) {
        case Metric::MaxQubits: v = d.max_qubits; break;
        case Metric::GateError: v = d.gate_error; break;
        case Metric::LatencyMs: v = d.latency_ms; break;
        case Metric::PowerKw: v = d.power_kw; break;
        }
        rows.emplace_back(d.id, v);
    }
    const bool descending = metric == Metric::MaxQubits;
    std::stable_sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) {
        if (a.second != b.second) return descending ? a.second > b.second : a.second < b.second;
        return a.first < b.first;
    });
    return rows;
}

}  // namespace qfi::devices
