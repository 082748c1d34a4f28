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

#include <string>
#include <vector>

#include "common.hpp"

namespace qfi::threatmodel {

enum class Category { Signature, KeyExchange, Hash, SymmetricCipher };
enum class QuantumAttack { Shor, Grover, None };
enum class Status { Broken, Weakened, Secure };

const char* to_string(Category c);
const char* to_string(QuantumAttack a);
const char* to_string(Status s);

struct PrimitiveProfile {
    std::string name;
    Category category = Category::Hash;
    unsigned classical_bits = 0;
    QuantumAttack quantum_attack = QuantumAttack::None;
    unsigned quantum_bits = 0;
    Status status = Status::Secure;
    std::string note;
};

/// Shor: 0 bits. Grover: half. No attack modelled: unchanged.
unsigned effective_security(unsigned classical_bits, QuantumAttack attack);
unsigned effective_security(const PrimitiveProfile& profile);

/// Status is curated per entry rather than derived from bits: SHA-256 and
/// AES-256 both halve under Grover yet are classified differently.
const std::vector<PrimitiveProfile>& vulnerability_index();

json to_json(const PrimitiveProfile& p);

}  // namespace qfi::threatmodel
