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
#include <httplib.h>
#include <json.hpp>

#include <filesystem>
#include <random>
#include <string>
#include <thread>

#include "qfi/qfi.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const std::string kConfig = std::string(QFI_SOURCE_DIR) + "/config/qfi.yaml";

struct Ctx {
    qfi_context* p = nullptr;
    Ctx() { REQUIRE(qfi_context_open(kConfig.c_str(), &p) == QFI_OK); }
    ~Ctx() { qfi_context_close(p); }
};

std::string take(char* s) {
    std::string out = s ? s : "";
    qfi_string_free(s);
    return out;
}

qfi_run_options opts(const char* device, std::uint64_t shots, std::uint64_t seed, std::uint32_t qubits = 8) {
    qfi_run_options o{};
    o.device_id = device;
    o.shots = shots;
    o.has_seed = 1;
    o.seed = seed;
    o.n_qubits = qubits;
    o.height = 2;
    return o;
}

fs::path temp_dir() {
    std::random_device rd;
    auto p = fs::temp_directory_path() / ("qfi-capi-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("basics") {
    CHECK(std::string(qfi_version()).size() > 0);
    CHECK(std::string(qfi_status_name(QFI_ERR_KEY_EXHAUSTED)) == "key_exhausted");
    qfi_context* ctx = nullptr;
    CHECK(qfi_context_open("/nonexistent/qfi.yaml", &ctx) != QFI_OK);
    CHECK(ctx == nullptr);
    CHECK(std::string(qfi_last_error()).find("nonexistent") != std::string::npos);
    CHECK(qfi_context_open(kConfig.c_str(), nullptr) == QFI_ERR_USAGE);

    char* out = nullptr;
    CHECK(qfi_document_format("{\"b\":1,\"a\":[1,2]}", 0, &out) == QFI_OK);
    CHECK(take(out) == "{\"a\":[1,2],\"b\":1}");
    CHECK(qfi_document_format("{", 0, &out) == QFI_ERR_VALIDATION);
}

TEST_CASE("catalog, impact and vulnerability documents") {
    Ctx c;
    char* out = nullptr;
    REQUIRE(qfi_devices_list(c.p, nullptr, &out) == QFI_OK);
    auto devices = json::parse(take(out));
    CHECK(devices["devices"].size() == 10);
    CHECK(qfi_devices_list(c.p, "mars-1", &out) == QFI_ERR_VALIDATION);

    REQUIRE(qfi_impact_estimate(c.p, "iqm-garnet", 2.0, "us-east-1", &out) == QFI_OK);
    auto est = json::parse(take(out));
    CHECK(est["energy_kj"] == doctest::Approx(50.0));
    CHECK(qfi_impact_estimate(c.p, "nope", 2.0, "us-east-1", &out) == QFI_ERR_NOT_FOUND);
    CHECK(qfi_impact_estimate(c.p, "sv1", -1.0, "us-east-1", &out) == QFI_OK);
    auto emulated = json::parse(take(out));
    CHECK(emulated["duration_s"].get<double>() > 0.0);

    REQUIRE(qfi_vulnerability_index(&out) == QFI_OK);
    CHECK(json::parse(take(out))["primitives"].size() == 5);
}

TEST_CASE("seeded runs are byte-identical") {
    Ctx c;
    auto o = opts("ionq-aria", 500, 7, 4);
    char *a = nullptr, *b = nullptr;
    REQUIRE(qfi_execute(c.p, &o, &a) == QFI_OK);
    REQUIRE(qfi_execute(c.p, &o, &b) == QFI_OK);
    CHECK(take(a) == take(b));

    auto big = opts("sv1", 5000, 11);
    REQUIRE(qfi_artifact_generate(c.p, &big, &a) == QFI_OK);
    REQUIRE(qfi_artifact_generate(c.p, &big, &b) == QFI_OK);
    auto first = take(a);
    CHECK(first == take(b));

    int valid = -1;
    CHECK(qfi_artifact_verify(first.c_str(), &valid) == QFI_OK);
    CHECK(valid == 1);
    auto doc = json::parse(first);
    doc["message"] = doc["message"].get<std::string>() + "!";
    CHECK(qfi_artifact_verify(doc.dump().c_str(), &valid) == QFI_OK);
    CHECK(valid == 0);
    CHECK(qfi_artifact_verify("not json", &valid) == QFI_ERR_VALIDATION);
    CHECK(qfi_artifact_verify("{}", &valid) == QFI_ERR_VALIDATION);
}

TEST_CASE("error statuses") {
    Ctx c;
    char* out = nullptr;
    auto unknown = opts("nope", 10, 1);
    CHECK(qfi_execute(c.p, &unknown, &out) == QFI_ERR_NOT_FOUND);
    auto wide = opts("sv1", 10, 1, 21);
    CHECK(qfi_execute(c.p, &wide, &out) == QFI_ERR_CAPACITY);
    auto thin = opts("sv1", 4, 1);
    CHECK(qfi_artifact_generate(c.p, &thin, &out) == QFI_ERR_INSUFFICIENT_ENTROPY);
    auto tall = opts("sv1", 5000, 1);
    tall.height = 11;
    CHECK(qfi_artifact_generate(c.p, &tall, &out) == QFI_ERR_VALIDATION);
    CHECK(qfi_execute(c.p, nullptr, &out) == QFI_ERR_USAGE);
}

TEST_CASE("entropy test report") {
    Ctx c;
    auto o = opts("sv1", 10000, 5);
    char* out = nullptr;
    REQUIRE(qfi_entropy_test(c.p, &o, &out) == QFI_OK);
    auto rep = json::parse(take(out));
    CHECK(rep["n_bits_raw"] == 80000);
    CHECK(rep["passed"] == true);
    CHECK(rep["entropy_class"] == "Computed");
}

TEST_CASE("ledger verification and server lifecycle") {
    Ctx c;
    const auto dir = temp_dir();
    char* out = nullptr;
    CHECK(qfi_ledger_verify(dir.string().c_str(), &out) == QFI_OK);
    CHECK(json::parse(take(out))["ok"] == true);

    qfi_server* server = nullptr;
    REQUIRE(qfi_server_create(c.p, dir.string().c_str(), &server) == QFI_OK);
    int port = 0;
    REQUIRE(qfi_server_bind(server, "127.0.0.1:0", &port) == QFI_OK);
    CHECK(port > 0);
    std::thread runner([&] { qfi_server_run(server); });

    httplib::Client cli("127.0.0.1", port);
    auto created = cli.Post("/api/session", "", "application/json");
    REQUIRE(created);
    CHECK(created->status == 200);
    auto id = json::parse(created->body)["session_id"].get<std::string>();
    auto vote = cli.Post(("/api/session/" + id + "/vote").c_str(), R"({"selections":["ZeroKnowledgeProofs"]})",
                         "application/json");
    REQUIRE(vote);
    CHECK(vote->status == 403);
    CHECK(json::parse(vote->body)["code"] == "consent_required");

    qfi_server_stop(server);
    runner.join();
    qfi_server_destroy(server);

    // corrupt the (empty) ledger by hand
    {
        std::ofstream(dir / "ledger.log") << "{\"garbage\":true}\n";
    }
    CHECK(qfi_ledger_verify(dir.string().c_str(), &out) == QFI_ERR_VERIFICATION_FAILED);
    CHECK(json::parse(take(out))["ok"] == false);
    fs::remove_all(dir);
}
