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

// Operator CLI. Talks to the core only through the C interface in qfi/qfi.h.
//
// Exit codes: 0 success, 1 usage, 2 validation (rejected input, unknown
// device or region, insufficient entropy, ...), 3 verification failure,
// 4 io.

#include <CLI11.hpp>

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <pthread.h>
#include <sstream>
#include <string>
#include <thread>

#include "qfi/qfi.h"

#ifndef QFI_DEFAULT_CONFIG
#define QFI_DEFAULT_CONFIG "config/qfi.yaml"
#endif

namespace {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kVerification = 3, kIo = 4 };

int exit_code(qfi_status s) {
    switch (s) {
    case QFI_OK: return kOk;
    case QFI_ERR_USAGE: return kUsage;
    case QFI_ERR_VERIFICATION_FAILED: return kVerification;
    case QFI_ERR_IO:
    case QFI_ERR_INTERNAL: return kIo;
    default: return kValidation;
    }
}

struct ContextCloser {
    void operator()(qfi_context* c) const { qfi_context_close(c); }
};
using Context = std::unique_ptr<qfi_context, ContextCloser>;

struct Globals {
    std::string config;
    bool pretty = false;
};

int report(qfi_status s) {
    std::cerr << "qfi: " << qfi_status_name(s) << ": " << qfi_last_error() << "\n";
    return exit_code(s);
}

/// Prints a returned document (canonical by default) and frees it.
void print_document(char* doc, bool pretty) {
    char* formatted = nullptr;
    if (pretty && qfi_document_format(doc, 1, &formatted) == QFI_OK) {
        std::cout << formatted << "\n";
        qfi_string_free(formatted);
    } else {
        std::cout << doc << "\n";
    }
    qfi_string_free(doc);
}

std::optional<Context> open_context(const Globals& g, int& rc) {
    qfi_context* raw = nullptr;
    if (auto s = qfi_context_open(g.config.c_str(), &raw); s != QFI_OK) {
        rc = report(s);
        return std::nullopt;
    }
    return Context(raw);
}

struct RunArgs {
    std::string device;
    std::uint32_t qubits = 0;
    std::uint64_t shots = 0;
    std::optional<std::uint64_t> seed;
    std::uint32_t height = 0;

    qfi_run_options to_options() const {
        qfi_run_options o{};
        o.device_id = device.c_str();
        o.n_qubits = qubits;
        o.shots = shots;
        o.has_seed = seed.has_value();
        o.seed = seed.value_or(0);
        o.height = height;
        return o;
    }
};

using RunFn = qfi_status (*)(qfi_context*, const qfi_run_options*, char**);

int run_document(const Globals& g, const RunArgs& args, RunFn fn) {
    int rc = kOk;
    auto ctx = open_context(g, rc);
    if (!ctx) return rc;
    auto opts = args.to_options();
    char* doc = nullptr;
    if (auto s = fn(ctx->get(), &opts, &doc); s != QFI_OK) return report(s);
    print_document(doc, g.pretty);
    return kOk;
}

int serve(const Globals& g, const std::string& addr, const std::string& data_dir) {
    int rc = kOk;
    auto ctx = open_context(g, rc);
    if (!ctx) return rc;

    qfi_server* server = nullptr;
    if (auto s = qfi_server_create(ctx->get(), data_dir.empty() ? nullptr : data_dir.c_str(), &server); s != QFI_OK) {
        return report(s);
    }
    std::unique_ptr<qfi_server, void (*)(qfi_server*)> guard(server, qfi_server_destroy);
    int port = 0;
    if (auto s = qfi_server_bind(server, addr.empty() ? nullptr : addr.c_str(), &port); s != QFI_OK) {
        return report(s);
    }
    std::cerr << "qfi: serving on port " << port << "\n";

    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);
    std::thread waiter([&] {
        int sig = 0;
        sigwait(&set, &sig);
        qfi_server_stop(server);
    });
    waiter.detach();

    if (auto s = qfi_server_run(server); s != QFI_OK) return report(s);
    return kOk;
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qfi operator tool"};
    app.require_subcommand(1);
    app.fallthrough();  // inherited, so --pretty/--config work after any subcommand

    Globals g;
    const char* env_config = std::getenv("QFI_CONFIG");
    g.config = env_config && *env_config ? env_config : QFI_DEFAULT_CONFIG;
    app.add_option("--config", g.config, "Service configuration file (default: $QFI_CONFIG or bundled)");
    app.add_flag("--pretty", g.pretty, "Indent output documents");

    int rc = kOk;

    // serve
    std::string addr, data_dir;
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP gateway");
    serve_cmd->add_option("--addr", addr, "host:port to listen on");
    serve_cmd->add_option("--data-dir", data_dir, "Directory holding the event logs");
    serve_cmd->callback([&] { rc = serve(g, addr, data_dir); });

    // devices list
    std::optional<std::string> region;
    auto* devices_cmd = app.add_subcommand("devices", "Device catalog")->require_subcommand(1);
    auto* devices_list = devices_cmd->add_subcommand("list", "Print the catalog with impact estimates");
    devices_list->add_option("--region", region, "Grid region for carbon estimates");
    devices_list->callback([&] {
        auto ctx = open_context(g, rc);
        if (!ctx) return;
        char* doc = nullptr;
        if (auto s = qfi_devices_list(ctx->get(), region ? region->c_str() : nullptr, &doc); s != QFI_OK) {
            rc = report(s);
            return;
        }
        print_document(doc, g.pretty);
    });

    // execute
    RunArgs run;
    auto* execute_cmd = app.add_subcommand("execute", "Run the entropy circuit offline");
    execute_cmd->add_option("--device", run.device, "Device id")->required();
    execute_cmd->add_option("--qubits", run.qubits, "Qubits (atoms for analog devices)")->required();
    execute_cmd->add_option("--shots", run.shots, "Shots")->required()->check(CLI::PositiveNumber);
    execute_cmd->add_option("--seed", run.seed, "Sampling seed; makes output reproducible");
    execute_cmd->callback([&] { rc = run_document(g, run, qfi_execute); });

    // artifact generate / verify
    std::string out_path, verify_path;
    auto* artifact_cmd = app.add_subcommand("artifact", "Post-quantum artifacts")->require_subcommand(1);
    auto* generate = artifact_cmd->add_subcommand("generate", "Full offline pipeline to a signed artifact");
    generate->add_option("--device", run.device, "Device id")->required();
    generate->add_option("--shots", run.shots, "Shots")->required()->check(CLI::PositiveNumber);
    generate->add_option("--qubits", run.qubits, "Qubits (default from config)");
    generate->add_option("--height", run.height, "Merkle tree height 1..10");
    generate->add_option("--seed", run.seed, "Sampling seed; makes output reproducible");
    generate->add_option("--out", out_path, "Artifact output file")->required();
    generate->callback([&] {
        auto ctx = open_context(g, rc);
        if (!ctx) return;
        auto opts = run.to_options();
        char* doc = nullptr;
        if (auto s = qfi_artifact_generate(ctx->get(), &opts, &doc); s != QFI_OK) {
            rc = report(s);
            return;
        }
        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
        out << doc;
        out.close();
        qfi_string_free(doc);
        if (!out) {
            std::cerr << "qfi: io: cannot write " << out_path << "\n";
            rc = kIo;
        }
    });
    auto* verify = artifact_cmd->add_subcommand("verify", "Exit 0 iff the artifact signature verifies");
    verify->add_option("file", verify_path, "Artifact document")->required();
    verify->callback([&] {
        auto text = read_file(verify_path);
        if (!text) {
            std::cerr << "qfi: io: cannot read " << verify_path << "\n";
            rc = kIo;
            return;
        }
        int valid = 0;
        if (auto s = qfi_artifact_verify(text->c_str(), &valid); s != QFI_OK) {
            rc = report(s);
            return;
        }
        std::cout << (valid ? "valid" : "invalid") << "\n";
        rc = valid ? kOk : kVerification;
    });

    // ledger verify
    std::string ledger_dir;
    auto* ledger_cmd = app.add_subcommand("ledger", "Provenance ledger")->require_subcommand(1);
    auto* ledger_verify = ledger_cmd->add_subcommand("verify", "Exit 0 iff the hash chain is intact");
    ledger_verify->add_option("--data-dir", ledger_dir, "Directory holding ledger.log (default from config)");
    ledger_verify->callback([&] {
        std::string dir = ledger_dir;
        if (dir.empty()) {
            auto ctx = open_context(g, rc);
            if (!ctx) return;
            dir = qfi_context_data_dir(ctx->get());
        }
        char* doc = nullptr;
        const auto s = qfi_ledger_verify(dir.c_str(), &doc);
        if (doc == nullptr) {
            rc = report(s);
            return;
        }
        print_document(doc, g.pretty);
        rc = exit_code(s);
    });

    // entropy test
    auto* entropy_cmd = app.add_subcommand("entropy", "Entropy source checks")->require_subcommand(1);
    auto* entropy_test = entropy_cmd->add_subcommand("test", "Health report for one execution's debiased bits");
    entropy_test->add_option("--device", run.device, "Device id")->required();
    entropy_test->add_option("--shots", run.shots, "Shots")->required()->check(CLI::PositiveNumber);
    entropy_test->add_option("--qubits", run.qubits, "Qubits (default from config)");
    entropy_test->add_option("--seed", run.seed, "Sampling seed; makes output reproducible");
    entropy_test->callback([&] { rc = run_document(g, run, qfi_entropy_test); });

    // impact estimate
    std::string impact_device, impact_region;
    std::optional<double> duration;
    auto* impact_cmd = app.add_subcommand("impact", "Environmental impact")->require_subcommand(1);
    auto* estimate = impact_cmd->add_subcommand("estimate", "Energy and carbon for one device");
    estimate->add_option("--device", impact_device, "Device id")->required();
    estimate->add_option("--duration", duration, "Seconds (default: emulated duration for default shots)")
        ->check(CLI::NonNegativeNumber);
    estimate->add_option("--region", impact_region, "Grid region")->required();
    estimate->callback([&] {
        auto ctx = open_context(g, rc);
        if (!ctx) return;
        char* doc = nullptr;
        if (auto s = qfi_impact_estimate(ctx->get(), impact_device.c_str(), duration.value_or(-1.0),
                                         impact_region.c_str(), &doc);
            s != QFI_OK) {
            rc = report(s);
            return;
        }
        print_document(doc, g.pretty);
    });

    // vulnerability index
    app.add_subcommand("vulnerability", "Print the quantum vulnerability index")->callback([&] {
        char* doc = nullptr;
        if (auto s = qfi_vulnerability_index(&doc); s != QFI_OK) {
            rc = report(s);
            return;
        }
        print_document(doc, g.pretty);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }
    return rc;
}
