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

#include <openssl/sha.h>

#include <cmath>
#include <fstream>
#include <random>

#include "devices.hpp"
#include "entropy.hpp"

using namespace qfi;
using namespace qfi::entropy;

namespace {

Bits biased_source(std::uint64_t seed, std::size_t n, double p_one) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p_one);
    Bits out(n);
    for (auto& b : out) b = coin(rng) ? 1 : 0;
    return out;
}

Digest raw_sha(const Bytes& data) {
    Digest d{};
    SHA256(data.data(), data.size(), d.data());
    return d;
}

Seed256 fixed_seed() {
    Seed256 s;
    for (int i = 0; i < 32; ++i) s.bytes[i] = static_cast<std::uint8_t>(i * 7 + 1);
    return s;
}

Bytes expand_block(const Seed256& s, std::uint32_t counter) {
    Bytes pre(kExpandTag.begin(), kExpandTag.end());
    pre.insert(pre.end(), s.bytes.begin(), s.bytes.end());
    for (int shift = 24; shift >= 0; shift -= 8) pre.push_back(static_cast<std::uint8_t>(counter >> shift));
    auto d = raw_sha(pre);
    return Bytes(d.begin(), d.end());
}

// Straight-line statistics for comparison with health_check.
struct Stats {
    double monobit, runs, min_entropy;
};
Stats oracle_stats(const Bits& b) {
    const double n = b.size();
    double ones = 0;
    for (auto v : b) ones += v;
    const double pi1 = ones / n, pi0 = 1 - pi1;
    double runs = 1;
    for (std::size_t i = 1; i < b.size(); ++i) runs += b[i] != b[i - 1];
    const double mu = 2 * n * pi1 * pi0 + 1;
    const double var = (mu - 1) * (mu - 2) / (n - 1);
    return {std::abs(ones - (n - ones)) / std::sqrt(n), (runs - mu) / std::sqrt(var),
            -std::log2(std::max(pi1, pi0))};
}

devices::Catalog shipped() { return devices::load_catalog_file(std::string(QFI_SOURCE_DIR) + "/config/devices.yaml"); }

}  // namespace

TEST_CASE("extract_bits is shot-major, leftmost first") {
    qsim::MeasurementRecord r{2, 2, 0, {0b01, 0b10}};
    CHECK(extract_bits(r, "e").bits == Bits{0, 1, 1, 0});
    qsim::MeasurementRecord one{3, 1, 0, {0b111}};
    CHECK(extract_bits(one, "e").bits == Bits{1, 1, 1});
    qsim::MeasurementRecord empty{3, 0, 0, {}};
    try {
        extract_bits(empty, "e");
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientEntropy);
    }
    auto rec = devices::execute({"sv1", qsim::Circuit::hadamard_layer(8), 64, 1}, shipped());
    CHECK(extract_bits(*rec.result, rec.execution_id).bits.size() == 512);
}

TEST_CASE("von Neumann debiasing") {
    CHECK(von_neumann_debias({0, 1, 1, 0, 1, 1, 0, 0, 0, 1}) == Bits{0, 1, 0});
    CHECK(von_neumann_debias(Bits(100, 0)).empty());
    CHECK(von_neumann_debias({1}).empty());
    CHECK(von_neumann_debias({1, 0, 1}) == Bits{1});
}

TEST_CASE("debiasing a p=0.7 source") {
    auto raw = biased_source(1, 100000, 0.7);
    auto out = von_neumann_debias(raw);
    CHECK(std::abs(double(out.size()) - 21000.0) <= 1500.0);
    CHECK(out.size() <= raw.size() / 2);
    auto rep = health_check(out);
    CHECK(rep.monobit_statistic <= 3.0);
}

TEST_CASE("debiaser output is pair-faithful") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        auto raw = biased_source(rng(), rng() % 300, 0.6);
        auto out = von_neumann_debias(raw);
        std::size_t k = 0;
        for (std::size_t i = 0; i + 1 < raw.size(); i += 2) {
            if (raw[i] == raw[i + 1]) continue;
            REQUIRE(k < out.size());
            CHECK(out[k++] == raw[i]);
        }
        CHECK(k == out.size());
    }
}

TEST_CASE("conditioning") {
    RawBits raw{biased_source(5, 4000, 0.5), "x"};
    auto a = condition(raw, "sv1", "exec-1", devices::EntropyClass::Computed);
    auto b = condition(raw, "sv1", "exec-1", devices::EntropyClass::Computed);
    auto c = condition(raw, "sv1", "exec-2", devices::EntropyClass::Computed);
    CHECK(a.bytes == b.bytes);
    CHECK(a.bytes != c.bytes);
    CHECK(a.source_execution == "exec-1");

    // Independent preimage: tag, context, packed debiased bits.
    auto deb = von_neumann_debias(raw.bits);
    std::string pre = "QFI-SEED-v1sv1|exec-1";
    Bytes bytes(pre.begin(), pre.end());
    Bytes packed((deb.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < deb.size(); ++i)
        if (deb[i]) packed[i / 8] |= static_cast<std::uint8_t>(0x80 >> (i % 8));
    bytes.insert(bytes.end(), packed.begin(), packed.end());
    CHECK(raw_sha(bytes) == a.bytes);

    auto m = condition(raw, "ionq-aria", "e", devices::EntropyClass::Measured);
    CHECK(m.entropy_class == devices::EntropyClass::Measured);

    RawBits thin{biased_source(6, 400, 0.5), "x"};  // ~100 debiased bits
    try {
        condition(thin, "sv1", "e", devices::EntropyClass::Computed);
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientEntropy);
    }
}

TEST_CASE("expansion") {
    auto s = fixed_seed();
    auto b0 = expand_block(s, 0), b1 = expand_block(s, 1);
    CHECK(expand(s, 32) == b0);
    auto e33 = expand(s, 33);
    CHECK(Bytes(e33.begin(), e33.begin() + 32) == b0);
    CHECK(e33[32] == b1[0]);
    auto e64 = expand(s, 64);
    CHECK(Bytes(e64.begin(), e64.begin() + 32) == expand(s, 32));
    for (std::size_t n : {1u, 7u, 31u, 65u, 100u, 1000u}) {
        auto big = expand(s, 1000);
        auto small = expand(s, n);
        CHECK(Bytes(big.begin(), big.begin() + n) == small);
    }
    CHECK(expand(s, kMaxExpandBytes).size() == kMaxExpandBytes);
    CHECK_THROWS_AS(expand(s, kMaxExpandBytes + 1), Error);
    CHECK_THROWS_AS(expand(s, 0), Error);

    Keystream ks(s.bytes);
    Bytes streamed(100);
    ks.read(std::span(streamed).first(10));
    ks.read(std::span(streamed).subspan(10));
    CHECK(streamed == expand(s, 100));
}

TEST_CASE("health check examples") {
    Bits alt(1000);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2;
    auto a = health_check(alt);
    CHECK(a.monobit_statistic == doctest::Approx(0.0));
    CHECK(a.runs_statistic > 3.0);
    CHECK_FALSE(a.passed);

    auto ones = health_check(Bits(1000, 1));
    CHECK(ones.monobit_statistic == doctest::Approx(std::sqrt(1000.0)).epsilon(1e-12));
    CHECK(ones.min_entropy_estimate == doctest::Approx(0.0));
    CHECK_FALSE(ones.passed);

    try {
        health_check(Bits(99, 0));
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooShort);
    }
}

TEST_CASE("health statistics match straight-line formulas") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 20; ++t) {
        auto bits = biased_source(rng(), 100 + rng() % 5000, 0.35 + 0.3 * unit_double(rng));
        auto rep = health_check(bits);
        auto o = oracle_stats(bits);
        CHECK(rep.monobit_statistic == doctest::Approx(o.monobit).epsilon(1e-12));
        CHECK(rep.runs_statistic == doctest::Approx(o.runs).epsilon(1e-9));
        CHECK(rep.min_entropy_estimate == doctest::Approx(o.min_entropy).epsilon(1e-12));
        CHECK(rep.min_entropy_estimate >= 0.0);
        CHECK(rep.min_entropy_estimate <= 1.0);
        CHECK(rep.passed == (rep.monobit_statistic <= 3.0 && std::abs(rep.runs_statistic) <= 3.0));
    }
}

TEST_CASE("pipeline: sv1 H8 at 10^4 shots passes") {
    auto cat = shipped();
    auto rec = devices::execute({"sv1", qsim::Circuit::hadamard_layer(8), 10000, 2026}, cat);
    auto raw = extract_bits(*rec.result, rec.execution_id);
    auto rep = health_check(von_neumann_debias(raw.bits));
    CHECK(rep.passed);
    auto seed = condition(raw, rec.device_id, rec.execution_id, rec.entropy_class);
    CHECK(seed.entropy_class == devices::EntropyClass::Computed);
}

TEST_CASE("report json keeps non-finite statistics readable") {
    EntropyReport r;
    r.runs_statistic = INFINITY;
    auto j = to_json(r);
    CHECK(j["runs_statistic"] == "inf");
}
