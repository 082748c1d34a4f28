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

#include "threatmodel.hpp"

namespace qfi::threatmodel {

const char* to_string(Category c) {
    switch (c) {
    case Category::Signature: return "Signature";
    case Category::KeyExchange: return "KeyExchange";
    case Category::Hash: return "Hash";
    case Category::SymmetricCipher: return "SymmetricCipher";
    }
    return "?";
}

const char* to_string(QuantumAttack a) {
    switch (a) {
    case QuantumAttack::Shor: return "Shor";
    case QuantumAttack::Grover: return "Grover";
    case QuantumAttack::None: return "None";
    }
    return "?";
}

const char* to_string(Status s) {
    switch (s) {
    case Status::Broken: return "Broken";
    case Status::Weakened: return "Weakened";
    case Status::Secure: return "Secure";
    }
    return "?";
}

unsigned effective_security(unsigned classical_bits, QuantumAttack attack) {
    switch (attack) {
    case QuantumAttack::Shor: return 0;
    case QuantumAttack::Grover: return classical_bits / 2;
    case QuantumAttack::None: return classical_bits;
    }
    return classical_bits;
}

unsigned effective_security(const PrimitiveProfile& profile) {
    return effective_security(profile.classical_bits, profile.quantum_attack);
}

namespace {

PrimitiveProfile make(std::string name, Category category, unsigned classical_bits, QuantumAttack attack,
                      Status status, std::string note) {
    return {std::move(name), category, classical_bits, attack, effective_security(classical_bits, attack),
            status, std::move(note)};
}

}  // namespace

const std::vector<PrimitiveProfile>& vulnerability_index() {
    static const std::vector<PrimitiveProfile> kIndex = {
        make("ECDSA-256", Category::Signature, 128, QuantumAttack::Shor, Status::Broken,
             "Shor recovers the private key once the public key has been exposed"),
        make("RSA-2048", Category::Signature, 112, QuantumAttack::Shor, Status::Broken,
             "fault-tolerant factoring removes the security guarantee"),
        make("DH-2048", Category::KeyExchange, 112, QuantumAttack::Shor, Status::Broken,
             "discrete logarithms become tractable, so forward secrecy is lost"),
        make("SHA-256", Category::Hash, 256, QuantumAttack::Grover, Status::Weakened,
             "Grover search halves preimage strength"),
        make("AES-256", Category::SymmetricCipher, 256, QuantumAttack::Grover, Status::Secure,
             "key strength halves but 128 bits remains an adequate margin"),
    };
    return kIndex;
}

json to_json(const PrimitiveProfile& p) {
    return {{"name", p.name},
            {"category", to_string(p.category)},
            {"classical_bits", p.classical_bits},
            {"quantum_attack", to_string(p.quantum_attack)},
            {"quantum_bits", p.quantum_bits},
            {"status", to_string(p.status)},
            {"note", p.note}};
}

}  // namespace qfi::threatmodel
