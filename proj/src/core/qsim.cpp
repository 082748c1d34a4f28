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

#include "qsim.hpp"

#include <algorithm>
#include <cmath>

namespace qfi::qsim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
const Amplitude kI{0.0, 1.0};

struct PendingPauli {
    std::size_t after_op;
    GateKind pauli;
};

}  // namespace

const char* gate_kind_name(GateKind kind) {
    switch (kind) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::S: return "S";
    case GateKind::T: return "T";
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
    }
    return "?";
}

Circuit Circuit::hadamard_layer(unsigned n_qubits) {
    Circuit c{n_qubits, {}};
    for (unsigned q = 0; q < n_qubits; ++q) c.ops.push_back(Gate::single(GateKind::H, q));
    return c;
}

void validate_gate(const Gate& gate, unsigned n_qubits) {
    if (gate.target >= n_qubits) {
        fail(ErrorCode::InvalidGate, std::string(gate_kind_name(gate.kind)) + " target " +
                                         std::to_string(gate.target) + " out of range for " +
                                         std::to_string(n_qubits) + " qubits");
    }
    if (gate.kind == GateKind::CNOT) {
        if (!gate.control) fail(ErrorCode::InvalidGate, "CNOT requires a control qubit");
        if (*gate.control >= n_qubits) fail(ErrorCode::InvalidGate, "CNOT control out of range");
        if (*gate.control == gate.target) fail(ErrorCode::InvalidGate, "CNOT control equals target");
    } else if (gate.control) {
        fail(ErrorCode::InvalidGate, std::string(gate_kind_name(gate.kind)) + " takes no control qubit");
    }
    if (!std::isfinite(gate.angle)) fail(ErrorCode::InvalidGate, "gate angle must be finite");
}

void validate_circuit(const Circuit& circuit) {
    if (circuit.n_qubits == 0) fail(ErrorCode::InvalidRequest, "circuit needs at least one qubit");
    if (circuit.n_qubits > kMaxQubits) {
        fail(ErrorCode::Capacity, std::to_string(circuit.n_qubits) + " qubits exceeds the simulator cap of " +
                                      std::to_string(kMaxQubits));
    }
    for (const auto& g : circuit.ops) validate_gate(g, circuit.n_qubits);
}

StateVector::StateVector(unsigned n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits == 0) fail(ErrorCode::InvalidRequest, "statevector needs at least one qubit");
    if (n_qubits > kMaxQubits) fail(ErrorCode::Capacity, "statevector exceeds the simulator cap");
    amps_.assign(std::size_t{1} << n_qubits, Amplitude{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector::StateVector(unsigned n_qubits, std::vector<Amplitude> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
    if (n_qubits == 0 || n_qubits > kMaxQubits) fail(ErrorCode::Capacity, "bad statevector size");
    if (amps_.size() != (std::size_t{1} << n_qubits)) {
        fail(ErrorCode::InvalidRequest, "amplitude count must be 2^n_qubits");
    }
}

double StateVector::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

std::vector<double> StateVector::probabilities() const {
    std::vector<double> p(amps_.size());
    std::transform(amps_.begin(), amps_.end(), p.begin(), [](const Amplitude& a) { return std::norm(a); });
    return p;
}

void StateVector::apply_single(unsigned target, const Amplitude (&m)[2][2]) {
    const std::size_t stride = std::size_t{1} << (n_qubits_ - 1 - target);
    const std::size_t dim = amps_.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const Amplitude a0 = amps_[i];
            const Amplitude a1 = amps_[i + stride];
            amps_[i] = m[0][0] * a0 + m[0][1] * a1;
            amps_[i + stride] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

void StateVector::apply_cnot(unsigned control, unsigned target) {
    const std::size_t cmask = std::size_t{1} << (n_qubits_ - 1 - control);
    const std::size_t tmask = std::size_t{1} << (n_qubits_ - 1 - target);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & cmask) && !(i & tmask)) std::swap(amps_[i], amps_[i | tmask]);
    }
}

void StateVector::apply(const Gate& gate) {
    validate_gate(gate, n_qubits_);
    const double half = gate.angle / 2.0;
    switch (gate.kind) {
    case GateKind::H: {
        const Amplitude m[2][2] = {{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}};
        apply_single(gate.target, m);
        break;
    }
    case GateKind::X: {
        const Amplitude m[2][2] = {{0.0, 1.0}, {1.0, 0.0}};
        apply_single(gate.target, m);
        break;
    }
    case GateKind::Y: {
        const Amplitude m[2][2] = {{0.0, -kI}, {kI, 0.0}};
        apply_single(gate.target, m);
        break;
    }
    case GateKind::Z: {
        const Amplitude m[2][2] = {{1.0, 0.0}, {0.0, -1.0}};
        apply_single(gate.target, m);
        break;
    }
    case GateKind::S: {
        const Amplitude m[2][2] = {{1.0, 0.0}, {0.0, kI}};
        apply_single(gate.target, m);
        break;
    }
    case GateKind::T: {
        const Amplitude m[2][2] = {{1.0, 0.0}, {0.0, std::polar(1.0, M_PI / 4.0)}};
        apply_single(gate.target, m);
        break;
    }
    case GateKind::RX: {
        const Amplitude m[2][2] = {{std::cos(half), -kI * std::sin(half)},
                                   {-kI * std::sin(half), std::cos(half)}};
        apply_single(gate.target, m);
        break;
    }
    case GateKind::RY: {
        const Amplitude m[2][2] = {{std::cos(half), -std::sin(half)}, {std::sin(half), std::cos(half)}};
        apply_single(gate.target, m);
        break;
    }
    case GateKind::RZ: {
        const Amplitude m[2][2] = {{std::polar(1.0, -half), 0.0}, {0.0, std::polar(1.0, half)}};
        apply_single(gate.target, m);
        break;
    }
    case GateKind::CNOT:
        apply_cnot(*gate.control, gate.target);
        break;
    }
}

StateVector apply_gate(StateVector state, const Gate& gate) {
    state.apply(gate);
    return state;
}

StateVector run_statevector(const Circuit& circuit) {
    validate_circuit(circuit);
    StateVector state(circuit.n_qubits);
    for (const auto& g : circuit.ops) state.apply(g);
    return state;
}

void validate_noise(const NoiseSpec& noise) {
    auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!in_unit(noise.depolarizing_prob) || !in_unit(noise.readout_flip_prob)) {
        fail(ErrorCode::InvalidRequest, "noise probabilities must lie in [0,1]");
    }
}

std::string index_to_bitstring(std::uint32_t index, unsigned n_qubits) {
    std::string s(n_qubits, '0');
    for (unsigned q = 0; q < n_qubits; ++q) {
        if (index & (1u << (n_qubits - 1 - q))) s[q] = '1';
    }
    return s;
}

std::map<std::string, std::uint64_t> MeasurementRecord::counts() const {
    std::map<std::uint32_t, std::uint64_t> by_index;
    for (auto o : outcomes) ++by_index[o];
    std::map<std::string, std::uint64_t> out;
    for (const auto& [idx, n] : by_index) out.emplace(index_to_bitstring(idx, n_qubits), n);
    return out;
}

std::string MeasurementRecord::bitstring(std::size_t shot) const {
    return index_to_bitstring(outcomes.at(shot), n_qubits);
}

namespace {

std::vector<double> cumulative(const StateVector& state) {
    auto p = state.probabilities();
    std::vector<double> cdf(p.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc += p[i];
        cdf[i] = acc;
    }
    return cdf;
}

std::uint32_t draw(const std::vector<double>& cdf, double u) {
    // Scale by the total so rounding drift in the norm cannot push u past the end.
    const double target = u * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    if (it == cdf.end()) --it;
    return static_cast<std::uint32_t>(it - cdf.begin());
}

}  // namespace

MeasurementRecord sample(const Circuit& circuit, std::uint64_t shots, std::uint64_t seed,
                         const NoiseSpec& noise) {
    validate_circuit(circuit);
    validate_noise(noise);
    if (shots == 0) fail(ErrorCode::InvalidRequest, "shots must be at least 1");

    const unsigned n = circuit.n_qubits;
    const auto ideal_cdf = cumulative(run_statevector(circuit));

    MeasurementRecord rec{n, shots, seed, {}};
    rec.outcomes.reserve(shots);
    std::mt19937_64 rng(seed);
    std::vector<PendingPauli> inserts;

    for (std::uint64_t shot = 0; shot < shots; ++shot) {
        inserts.clear();
        if (noise.depolarizing_prob > 0.0) {
            for (std::size_t k = 0; k < circuit.ops.size(); ++k) {
                if (unit_double(rng) < noise.depolarizing_prob) {
                    static constexpr GateKind kPaulis[3] = {GateKind::X, GateKind::Y, GateKind::Z};
                    inserts.push_back({k, kPaulis[static_cast<int>(unit_double(rng) * 3.0)]});
                }
            }
        }

        std::uint32_t outcome;
        if (inserts.empty()) {
            outcome = draw(ideal_cdf, unit_double(rng));
        } else {
            StateVector traj(n);
            auto next = inserts.begin();
            for (std::size_t k = 0; k < circuit.ops.size(); ++k) {
                traj.apply(circuit.ops[k]);
                for (; next != inserts.end() && next->after_op == k; ++next) {
                    traj.apply(Gate::single(next->pauli, circuit.ops[k].target));
                }
            }
            outcome = draw(cumulative(traj), unit_double(rng));
        }

        if (noise.readout_flip_prob > 0.0) {
            for (unsigned q = 0; q < n; ++q) {
                if (unit_double(rng) < noise.readout_flip_prob) outcome ^= 1u << (n - 1 - q);
            }
        }
        rec.outcomes.push_back(outcome);
    }
    return rec;
}

MeasurementRecord run_analog_blockade(unsigned n_atoms, std::uint64_t shots, std::uint64_t seed,
                                      double excitation_bias) {
    if (n_atoms == 0 || n_atoms > kMaxAtoms) {
        fail(ErrorCode::Capacity, "analog register must hold 1.." + std::to_string(kMaxAtoms) + " atoms");
    }
    if (shots == 0) fail(ErrorCode::InvalidRequest, "shots must be at least 1");
    if (!(excitation_bias > 0.0 && excitation_bias < 1.0)) {
        fail(ErrorCode::InvalidRequest, "excitation_bias must lie in (0,1)");
    }

    MeasurementRecord rec{n_atoms, shots, seed, {}};
    rec.outcomes.reserve(shots);
    std::mt19937_64 rng(seed);
    for (std::uint64_t shot = 0; shot < shots; ++shot) {
        std::uint32_t outcome = 0;
        bool prev_excited = false;
        for (unsigned i = 0; i < n_atoms; ++i) {
            // A draw is consumed for every atom so the stream layout is fixed.
            const bool excite = unit_double(rng) < excitation_bias && !prev_excited;
            if (excite) outcome |= 1u << (n_atoms - 1 - i);
            prev_excited = excite;
        }
        rec.outcomes.push_back(outcome);
    }
    return rec;
}

}  // namespace qfi::qsim
