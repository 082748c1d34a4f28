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

#include <cmath>
#include <complex>
#include <random>
#include <set>

#include "qsim.hpp"
#include "../support/oracles.hpp"

using namespace qfi;
using namespace qfi::qsim;
using cd = std::complex<double>;

namespace {

Circuit to_circuit(unsigned n, const std::vector<oracle::Step>& steps) {
    Circuit c{n, {}};
    for (const auto& s : steps) {
        const auto kind = static_cast<GateKind>(static_cast<int>(s.op));
        if (s.op == oracle::Op::CNOT) c.ops.push_back(Gate::cnot(s.control, s.target));
        else c.ops.push_back(Gate::rotation(kind, s.target, s.angle));
    }
    return c;
}

}  // namespace

TEST_CASE("single gates on basis states") {
    const double r = 1.0 / std::sqrt(2.0);
    auto h = apply_gate(StateVector(1), Gate::single(GateKind::H, 0));
    CHECK(std::abs(h.amplitudes()[0] - cd(r)) < 1e-12);
    CHECK(std::abs(h.amplitudes()[1] - cd(r)) < 1e-12);

    auto x = apply_gate(StateVector(1), Gate::single(GateKind::X, 0));
    CHECK(std::abs(x.amplitudes()[0]) < 1e-12);
    CHECK(std::abs(x.amplitudes()[1] - cd(1)) < 1e-12);

    StateVector plus(2, {r, 0, r, 0});  // (|00> + |10>)/sqrt2
    auto bell = apply_gate(plus, Gate::cnot(0, 1));
    CHECK(std::abs(bell.amplitudes()[0] - cd(r)) < 1e-12);
    CHECK(std::abs(bell.amplitudes()[1]) < 1e-12);
    CHECK(std::abs(bell.amplitudes()[2]) < 1e-12);
    CHECK(std::abs(bell.amplitudes()[3] - cd(r)) < 1e-12);
}

TEST_CASE("qubit 0 is the most significant bit") {
    auto s = apply_gate(StateVector(3), Gate::single(GateKind::X, 0));
    CHECK(std::abs(s.amplitudes()[4] - cd(1)) < 1e-12);
    CHECK(index_to_bitstring(4, 3) == "100");
}

TEST_CASE("bad indices are rejected") {
    CHECK_THROWS_AS(apply_gate(StateVector(2), Gate::single(GateKind::H, 2)), Error);
    CHECK_THROWS_AS(apply_gate(StateVector(2), Gate::cnot(1, 1)), Error);
    CHECK_THROWS_AS(apply_gate(StateVector(2), Gate::cnot(0, 5)), Error);
    try {
        validate_circuit(Circuit{2, {Gate::single(GateKind::X, 3)}});
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidGate);
    }
    Gate missing_control{GateKind::CNOT, 0.0, 1, std::nullopt};
    CHECK_THROWS_AS(validate_gate(missing_control, 2), Error);
    CHECK_THROWS_AS(validate_gate(Gate::rotation(GateKind::RX, 0, NAN), 1), Error);
}

TEST_CASE("run_statevector basics") {
    auto empty = run_statevector(Circuit{2, {}});
    CHECK(std::abs(empty.amplitudes()[0] - cd(1)) < 1e-12);
    for (int k = 1; k < 4; ++k) CHECK(std::abs(empty.amplitudes()[k]) < 1e-12);

    auto hh = run_statevector(Circuit::hadamard_layer(2));
    for (const auto& a : hh.amplitudes()) CHECK(std::abs(a - cd(0.5)) < 1e-12);

    try {
        run_statevector(Circuit{21, {}});
        FAIL("expected capacity error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Capacity);
    }
}

TEST_CASE("dense oracle: one 6-qubit 30-gate circuit") {
    std::mt19937_64 rng(2024);
    auto steps = oracle::random_steps(rng, 6, 30);
    auto got = run_statevector(to_circuit(6, steps)).amplitudes();
    auto want = oracle::run(6, steps);
    for (std::size_t k = 0; k < want.size(); ++k) CHECK(std::abs(got[k] - want[k]) < 1e-9);
}

TEST_CASE("dense oracle: 200 random circuits") {
    std::mt19937_64 rng(77);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const unsigned n = 1 + rng() % 6;
        auto steps = oracle::random_steps(rng, n, rng() % 41);
        auto got = run_statevector(to_circuit(n, steps)).amplitudes();
        auto want = oracle::run(n, steps);
        for (std::size_t k = 0; k < want.size(); ++k) worst = std::max(worst, std::abs(got[k] - want[k]));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("norm is preserved") {
    std::mt19937_64 rng(5);
    for (unsigned n : {1u, 4u, 10u, 14u}) {
        auto c = to_circuit(n, oracle::random_steps(rng, n, 60));
        CHECK(std::abs(run_statevector(c).norm_squared() - 1.0) < 1e-10);
    }
}

TEST_CASE("sampling: Born rule on one qubit") {
    Circuit c{1, {Gate::single(GateKind::H, 0)}};
    auto rec = sample(c, 100000, 11);
    auto counts = rec.counts();
    for (const char* k : {"0", "1"}) CHECK(std::abs(counts[k] / 100000.0 - 0.5) <= 0.01);
}

TEST_CASE("sampling: frequencies within 4 sigma of statevector probabilities") {
    Circuit c{3, {Gate::rotation(GateKind::RY, 0, 1.1), Gate::single(GateKind::H, 1), Gate::cnot(1, 2),
                  Gate::rotation(GateKind::RX, 2, 0.4)}};
    auto probs = run_statevector(c).probabilities();
    const std::uint64_t shots = 50000;
    auto counts = sample(c, shots, 99).counts();
    for (std::uint32_t k = 0; k < probs.size(); ++k) {
        const double p = probs[k];
        const double f = counts[index_to_bitstring(k, 3)] / double(shots);
        CHECK(std::abs(f - p) <= 4 * std::sqrt(p * (1 - p) / shots) + 1e-12);
    }
}

TEST_CASE("sampling: deterministic outcomes") {
    auto x = sample(Circuit{1, {Gate::single(GateKind::X, 0)}}, 321, 1).counts();
    CHECK(x.size() == 1);
    CHECK(x["1"] == 321);

    auto flipped = sample(Circuit{3, {}}, 50, 9, {0.0, 1.0}).counts();
    CHECK(flipped.size() == 1);
    CHECK(flipped["111"] == 50);
}

TEST_CASE("sampling is deterministic per seed") {
    auto c = Circuit::hadamard_layer(5);
    NoiseSpec noise{0.05, 0.02};
    auto a = sample(c, 2000, 42, noise);
    auto b = sample(c, 2000, 42, noise);
    auto d = sample(c, 2000, 43, noise);
    CHECK(a.outcomes == b.outcomes);
    CHECK(a.outcomes != d.outcomes);
    CHECK(a.outcomes.size() == 2000);
}

TEST_CASE("noise: depolarizing after X flips the outcome at rate 2p/3") {
    // X followed by a random Pauli: X or Y flip back to 0, Z leaves 1.
    const double p = 0.3;
    const std::uint64_t shots = 60000;
    auto counts = sample(Circuit{1, {Gate::single(GateKind::X, 0)}}, shots, 8, {p, 0.0}).counts();
    const double want = 2 * p / 3;
    CHECK(std::abs(counts["0"] / double(shots) - want) <= 4 * std::sqrt(want * (1 - want) / shots));
}

TEST_CASE("noise spec validation") {
    CHECK_THROWS_AS(validate_noise({-0.1, 0.0}), Error);
    CHECK_THROWS_AS(validate_noise({0.0, 1.5}), Error);
    CHECK_NOTHROW(validate_noise({0.0, 1.0}));
}

TEST_CASE("blockade: never two adjacent excitations") {
    auto two = run_analog_blockade(2, 5000, 3, 0.5).counts();
    CHECK(two.count("11") == 0);

    auto four = run_analog_blockade(4, 20000, 4, 0.5).counts();
    for (const auto& [bits, n] : four) CHECK(bits.find("11") == std::string::npos);
    CHECK(four.size() <= oracle::count_no_adjacent_ones(4));
    CHECK(oracle::count_no_adjacent_ones(4) == 8);
}

TEST_CASE("blockade: recurrence bound against enumeration") {
    for (unsigned n = 1; n <= 12; ++n) CHECK(oracle::recurrence(n) == oracle::count_no_adjacent_ones(n));
    CHECK(oracle::recurrence(10) == 144);

    auto rec = run_analog_blockade(10, 100000, 10, 0.5);
    auto counts = rec.counts();
    for (const auto& [bits, n] : counts) CHECK(bits.find("11") == std::string::npos);
    CHECK(counts.size() <= 144);
}

TEST_CASE("blockade: deterministic and validated") {
    CHECK(run_analog_blockade(6, 500, 1, 0.4).outcomes == run_analog_blockade(6, 500, 1, 0.4).outcomes);
    CHECK_THROWS_AS(run_analog_blockade(17, 10, 1, 0.5), Error);
    CHECK_THROWS_AS(run_analog_blockade(0, 10, 1, 0.5), Error);
    CHECK_THROWS_AS(run_analog_blockade(4, 10, 1, 0.0), Error);
    CHECK_THROWS_AS(run_analog_blockade(4, 10, 1, 1.0), Error);
}
