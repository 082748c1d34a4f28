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

#include "qfi/qfi.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <string>

#include "../core/config.hpp"
#include "../core/devices.hpp"
#include "../core/entropy.hpp"
#include "../core/gateway.hpp"
#include "../core/http.hpp"
#include "../core/impact.hpp"
#include "../core/ledger.hpp"
#include "../core/pqsig.hpp"
#include "../core/threatmodel.hpp"

struct qfi_context {
    qfi::config::Environment env;
    std::string data_dir;
};

struct qfi_server {
    std::unique_ptr<qfi::gateway::Gateway> gateway;
    std::unique_ptr<qfi::http::HttpServer> http;
    std::string default_addr;
};

namespace {

thread_local std::string g_last_error;

qfi_status status_for(qfi::ErrorCode code) {
    using qfi::ErrorCode;
    switch (code) {
    case ErrorCode::NotFound: return QFI_ERR_NOT_FOUND;
    case ErrorCode::Unavailable: return QFI_ERR_UNAVAILABLE;
    case ErrorCode::Capacity: return QFI_ERR_CAPACITY;
    case ErrorCode::InsufficientEntropy: return QFI_ERR_INSUFFICIENT_ENTROPY;
    case ErrorCode::KeyExhausted: return QFI_ERR_KEY_EXHAUSTED;
    case ErrorCode::ChainCorrupt: return QFI_ERR_VERIFICATION_FAILED;
    case ErrorCode::Config: return QFI_ERR_CONFIG;
    case ErrorCode::Io: return QFI_ERR_IO;
    default: return QFI_ERR_VALIDATION;
    }
}

template <typename Fn>
qfi_status guard(Fn&& fn) {
    try {
        return fn();
    } catch (const qfi::Error& e) {
        g_last_error = e.what();
        return status_for(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return QFI_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return QFI_ERR_INTERNAL;
    }
}

qfi_status usage(const char* message) {
    g_last_error = message;
    return QFI_ERR_USAGE;
}

char* dup_string(const std::string& s) {
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

qfi_status emit(const qfi::json& doc, char** out) {
    *out = dup_string(qfi::canonical(doc));
    return QFI_OK;
}

/// Identifiers and clock for one offline run. Seeded runs derive both from
/// the inputs; unseeded runs use fresh randomness and the wall clock.
struct RunIdentity {
    bool seeded = false;
    std::string material;

    std::string id(const char* label) const {
        if (!seeded) return qfi::uuid_v4();
        return qfi::uuid_v4_from(qfi::sha256("QFI-CLI-v1|" + std::string(label) + "|" + material));
    }
    std::optional<qfi::TimePoint> clock() const {
        if (!seeded) return std::nullopt;
        return qfi::TimePoint{};
    }
};

struct RunPlan {
    const qfi::devices::DeviceSpec* device = nullptr;
    qfi::devices::ExecutionRequest request;
    RunIdentity identity;
};

RunPlan plan_run(const qfi_context* ctx, const qfi_run_options* opts) {
    const auto& cfg = ctx->env.config;
    RunPlan plan;
    plan.device = &qfi::devices::find_device(ctx->env.catalog, opts->device_id);
    const unsigned width = opts->n_qubits ? opts->n_qubits : cfg.default_qubits;
    if (width > qfi::qsim::kMaxQubits) qfi::fail(qfi::ErrorCode::Capacity, "at most 20 qubits can be emulated");

    auto& req = plan.request;
    req.device_id = plan.device->id;
    req.shots = opts->shots ? opts->shots : cfg.default_shots;
    req.seed = opts->has_seed ? opts->seed : qfi::os_random_u64();
    if (plan.device->execution_model == qfi::devices::ExecutionModel::AnalogBlockade) {
        req.payload = qfi::devices::AnalogParams{width, cfg.default_excitation_bias};
    } else {
        req.payload = qfi::qsim::Circuit::hadamard_layer(width);
    }

    plan.identity.seeded = opts->has_seed != 0;
    plan.identity.material = req.device_id + "|" + std::to_string(width) + "|" + std::to_string(req.shots) + "|" +
                             std::to_string(req.seed) + "|" + std::to_string(opts->height);
    return plan;
}

qfi::devices::ExecutionRecord run_plan(const qfi_context* ctx, const RunPlan& plan) {
    qfi::devices::ExecuteOptions eo;
    if (plan.identity.seeded) eo.execution_id = plan.identity.id("execution");
    eo.submitted_at = plan.identity.clock();
    auto rec = qfi::devices::execute(plan.request, ctx->env.catalog, eo);
    if (rec.status != qfi::devices::Status::COMPLETED) {
        qfi::fail(qfi::ErrorCode::InvalidState, "execution failed: " + rec.failure_reason.value_or("unknown"));
    }
    return rec;
}

bool valid_opts(const qfi_context* ctx, const qfi_run_options* opts, char** out) {
    return ctx != nullptr && opts != nullptr && opts->device_id != nullptr && out != nullptr;
}

}  // namespace

extern "C" {

const char* qfi_version(void) { return "1.0.0"; }

const char* qfi_status_name(qfi_status status) {
    switch (status) {
    case QFI_OK: return "ok";
    case QFI_ERR_USAGE: return "usage";
    case QFI_ERR_VALIDATION: return "validation";
    case QFI_ERR_NOT_FOUND: return "not_found";
    case QFI_ERR_UNAVAILABLE: return "unavailable";
    case QFI_ERR_CAPACITY: return "capacity";
    case QFI_ERR_INSUFFICIENT_ENTROPY: return "insufficient_entropy";
    case QFI_ERR_KEY_EXHAUSTED: return "key_exhausted";
    case QFI_ERR_VERIFICATION_FAILED: return "verification_failed";
    case QFI_ERR_CONFIG: return "config";
    case QFI_ERR_IO: return "io";
    case QFI_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* qfi_last_error(void) { return g_last_error.c_str(); }

void qfi_string_free(char* s) { std::free(s); }

qfi_status qfi_document_format(const char* json_text, int pretty, char** out_json) {
    if (json_text == nullptr || out_json == nullptr) return usage("null argument");
    return guard([&] {
        auto doc = qfi::json::parse(json_text, nullptr, false);
        if (doc.is_discarded()) qfi::fail(qfi::ErrorCode::Validation, "document is not valid JSON");
        *out_json = dup_string(pretty ? doc.dump(2, ' ', false, qfi::json::error_handler_t::strict) : qfi::canonical(doc));
        return QFI_OK;
    });
}

qfi_status qfi_context_open(const char* config_path, qfi_context** out) {
    if (config_path == nullptr || out == nullptr) return usage("null argument");
    *out = nullptr;
    return guard([&] {
        auto ctx = std::make_unique<qfi_context>();
        ctx->env = qfi::config::load_environment(config_path);
        ctx->data_dir = ctx->env.config.data_dir;
        *out = ctx.release();
        return QFI_OK;
    });
}

void qfi_context_close(qfi_context* ctx) { delete ctx; }

const char* qfi_context_data_dir(const qfi_context* ctx) { return ctx ? ctx->data_dir.c_str() : ""; }

qfi_status qfi_devices_list(qfi_context* ctx, const char* region, char** out_json) {
    if (ctx == nullptr || out_json == nullptr) return usage("null argument");
    return guard([&] {
        const auto& cfg = ctx->env.config;
        const auto& r = qfi::impact::find_region(ctx->env.regions, region ? region : cfg.default_region);
        qfi::json rows = qfi::json::array();
        for (const auto& d : ctx->env.catalog) {
            auto row = qfi::devices::to_json(d);
            row["impact"] = qfi::impact::to_json(qfi::impact::estimate(d, cfg.default_duration_s, r));
            rows.push_back(std::move(row));
        }
        return emit({{"region", r.region_code}, {"duration_s", cfg.default_duration_s}, {"devices", rows}}, out_json);
    });
}

qfi_status qfi_execute(qfi_context* ctx, const qfi_run_options* opts, char** out_json) {
    if (!valid_opts(ctx, opts, out_json)) return usage("null argument");
    return guard([&] {
        auto plan = plan_run(ctx, opts);
        return emit(qfi::devices::to_json(run_plan(ctx, plan)), out_json);
    });
}

qfi_status qfi_entropy_test(qfi_context* ctx, const qfi_run_options* opts, char** out_json) {
    if (!valid_opts(ctx, opts, out_json)) return usage("null argument");
    return guard([&] {
        auto plan = plan_run(ctx, opts);
        auto rec = run_plan(ctx, plan);
        auto raw = qfi::entropy::extract_bits(*rec.result, rec.execution_id);
        auto debiased = qfi::entropy::von_neumann_debias(raw.bits);
        auto report = qfi::entropy::health_check(debiased);
        report.n_bits_raw = raw.bits.size();
        report.n_bits_debiased = debiased.size();
        auto doc = qfi::entropy::to_json(report);
        doc["device_id"] = rec.device_id;
        doc["execution_id"] = rec.execution_id;
        doc["entropy_class"] = qfi::devices::to_string(rec.entropy_class);
        return emit(doc, out_json);
    });
}

qfi_status qfi_artifact_generate(qfi_context* ctx, const qfi_run_options* opts, char** out_json) {
    if (!valid_opts(ctx, opts, out_json)) return usage("null argument");
    return guard([&] {
        const auto& cfg = ctx->env.config;
        auto plan = plan_run(ctx, opts);
        auto rec = run_plan(ctx, plan);
        auto raw = qfi::entropy::extract_bits(*rec.result, rec.execution_id);
        auto seed = qfi::entropy::condition(raw, rec.device_id, rec.execution_id, rec.entropy_class,
                                            cfg.min_debiased_bits);
        auto keyset = qfi::pqsig::keygen(seed, opts->height ? opts->height : cfg.default_height);
        qfi::pqsig::ArtifactOptions ao;
        if (plan.identity.seeded) {
            ao.artifact_id = plan.identity.id("artifact");
            ao.created_at = rec.completed_at;
        }
        auto artifact = qfi::pqsig::sign_artifact(plan.identity.id("session"), rec.device_id, rec, seed, keyset, ao);
        return emit(qfi::pqsig::to_json(artifact), out_json);
    });
}

qfi_status qfi_artifact_verify(const char* artifact_json, int* out_valid) {
    if (artifact_json == nullptr || out_valid == nullptr) return usage("null argument");
    *out_valid = 0;
    return guard([&] {
        auto doc = qfi::json::parse(artifact_json, nullptr, false);
        if (doc.is_discarded()) qfi::fail(qfi::ErrorCode::Validation, "artifact is not valid JSON");
        *out_valid = qfi::pqsig::verify_artifact(qfi::pqsig::artifact_from_json(doc)) ? 1 : 0;
        return QFI_OK;
    });
}

qfi_status qfi_impact_estimate(qfi_context* ctx, const char* device_id, double duration_s, const char* region,
                               char** out_json) {
    if (ctx == nullptr || device_id == nullptr || out_json == nullptr) return usage("null argument");
    return guard([&] {
        const auto& cfg = ctx->env.config;
        const auto& device = qfi::devices::find_device(ctx->env.catalog, device_id);
        const auto& r = qfi::impact::find_region(ctx->env.regions, region ? region : cfg.default_region);
        const double d = duration_s >= 0.0 ? duration_s
                                           : qfi::impact::execution_duration_s(device, cfg.default_shots,
                                                                               cfg.per_shot_cost_s);
        return emit(qfi::impact::to_json(qfi::impact::estimate(device, d, r)), out_json);
    });
}

qfi_status qfi_vulnerability_index(char** out_json) {
    if (out_json == nullptr) return usage("null argument");
    return guard([&] {
        qfi::json rows = qfi::json::array();
        for (const auto& p : qfi::threatmodel::vulnerability_index()) rows.push_back(qfi::threatmodel::to_json(p));
        return emit({{"primitives", rows}}, out_json);
    });
}

qfi_status qfi_ledger_verify(const char* data_dir, char** out_json) {
    if (data_dir == nullptr || out_json == nullptr) return usage("null argument");
    return guard([&] {
        const auto path = (std::filesystem::path(data_dir) / "ledger.log").string();
        auto status = qfi::ledger::verify_file(path);
        emit(qfi::ledger::to_json(status), out_json);
        return status.ok ? QFI_OK : QFI_ERR_VERIFICATION_FAILED;
    });
}

qfi_status qfi_server_create(qfi_context* ctx, const char* data_dir, qfi_server** out) {
    if (ctx == nullptr || out == nullptr) return usage("null argument");
    *out = nullptr;
    return guard([&] {
        auto env = ctx->env;
        if (data_dir != nullptr) env.config.data_dir = data_dir;
        auto server = std::make_unique<qfi_server>();
        server->default_addr = env.config.addr;
        server->gateway = std::make_unique<qfi::gateway::Gateway>(std::move(env));
        server->http = std::make_unique<qfi::http::HttpServer>(*server->gateway);
        *out = server.release();
        return QFI_OK;
    });
}

qfi_status qfi_server_bind(qfi_server* server, const char* addr, int* out_port) {
    if (server == nullptr) return usage("null argument");
    return guard([&] {
        auto [host, port] = qfi::config::split_addr(addr ? addr : server->default_addr);
        const int bound = server->http->bind(host, port);
        if (bound < 0) qfi::fail(qfi::ErrorCode::Io, "cannot bind " + host + ":" + std::to_string(port));
        if (out_port) *out_port = bound;
        return QFI_OK;
    });
}

qfi_status qfi_server_run(qfi_server* server) {
    if (server == nullptr) return usage("null argument");
    return guard([&] {
        server->http->run();
        return QFI_OK;
    });
}

void qfi_server_stop(qfi_server* server) {
    if (server) server->http->stop();
}

void qfi_server_destroy(qfi_server* server) { delete server; }

}  // extern "C"
