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

/// Gate-based statevector simulation.
///
/// Bit ordering: qubit 0 is the most significant bit of an amplitude index
/// and the leftmost character of a measured bitstring. A bitstring is thus the
/// plain binary spelling of the amplitude index.
///
/// Sampling uses std::mt19937_64 seeded directly with the 64-bit request seed;
/// only raw engine output is consumed (no std distributions), so a given seed
/// reproduces the same shots on every conforming standard library.

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"

namespace qfi::qsim {

inline constexpr unsigned kMaxQubits = 20;
inline constexpr unsigned kMaxAtoms = 16;

using Amplitude = std::complex<double>;

enum class GateKind { H, X, Y, Z, S, T, RX, RY, RZ, CNOT };

const char* gate_kind_name(GateKind kind);

struct Gate {
    GateKind kind = GateKind::H;
    double angle = 0.0;  // RX/RY/RZ only
    unsigned target = 0;
    std::optional<unsigned> control;  // CNOT only

    static Gate single(GateKind kind, unsigned target) { return {kind, 0.0, target, std::nullopt}; }
    static Gate rotation(GateKind kind, unsigned target, double angle) {
        return {kind, angle, target, std::nullopt};
    }
    static Gate cnot(unsigned control, unsigned target) { return {GateKind::CNOT, 0.0, target, control}; }
};

struct Circuit {
    unsigned n_qubits = 1;
    std::vector<Gate> ops;

    /// H on every qubit: the standard entropy-generation circuit.
    static Circuit hadamard_layer(unsigned n_qubits);
};

/// Throws InvalidGate on bad indices, a missing/extra control, or a
/// non-finite angle.
void validate_gate(const Gate& gate, unsigned n_qubits);
/// Throws Capacity above kMaxQubits and InvalidGate for any bad op.
void validate_circuit(const Circuit& circuit);

class StateVector {
  public:
    /// |0...0> on n qubits.
    explicit StateVector(unsigned n_qubits);
    StateVector(unsigned n_qubits, std::vector<Amplitude> amplitudes);

    unsigned n_qubits() const noexcept { return n_qubits_; }
    const std::vector<Amplitude>& amplitudes() const noexcept { return amps_; }
    double norm_squared() const;
    std::vector<double> probabilities() const;

    /// In-place application; the free function apply_gate is the value form.
    void apply(const Gate& gate);

  private:
    void apply_single(unsigned target, const Amplitude (&m)[2][2]);
    void apply_cnot(unsigned control, unsigned target);

    unsigned n_qubits_;
    std::vector<Amplitude> amps_;
};

StateVector apply_gate(StateVector state, const Gate& gate);
StateVector run_statevector(const Circuit& circuit);

struct NoiseSpec {
    double depolarizing_prob = 0.0;
    double readout_flip_prob = 0.0;

    bool is_zero() const noexcept { return depolarizing_prob == 0.0 && readout_flip_prob == 0.0; }
};

void validate_noise(const NoiseSpec& noise);

/// Sampled outcomes. `outcomes` keeps shot order (each entry is the amplitude
/// index of the measured bitstring); counts are derived from it.
struct MeasurementRecord {
    unsigned n_qubits = 0;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint32_t> outcomes;

    std::map<std::string, std::uint64_t> counts() const;
    std::string bitstring(std::size_t shot) const;
};

std::string index_to_bitstring(std::uint32_t index, unsigned n_qubits);

MeasurementRecord sample(const Circuit& circuit, std::uint64_t shots, std::uint64_t seed,
                         const NoiseSpec& noise = {});

/// 1-D hard-blockade toy model of a Rydberg array: scanning left to right,
/// atom i is excited with probability `excitation_bias` unless atom i-1 is.
MeasurementRecord run_analog_blockade(unsigned n_atoms, std::uint64_t shots, std::uint64_t seed,
                                      double excitation_bias);

}  // namespace qfi::qsim
