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

/// Hash-based stateful signatures: Lamport one-time keys at the leaves of a
/// Merkle tree whose root is the published verification key.
///
/// Key material layout: the keystream expanded from the seed is consumed
/// leaf by leaf, then bit value (0 before 1), then bit position 0..255, 32
/// bytes per secret. Message digests are read MSB-first within each byte.

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "common.hpp"
#include "devices.hpp"
#include "entropy.hpp"

namespace qfi::pqsig {

inline constexpr std::size_t kBits = 256;
inline constexpr unsigned kMinHeight = 1;
inline constexpr unsigned kMaxHeight = 10;
inline constexpr unsigned kDefaultHeight = 4;

using Block = Digest;
using LamportTable = std::array<std::array<Block, kBits>, 2>;  // [bit_value][position]

struct LamportKeypair {
    LamportTable secret{};
    LamportTable public_key{};
    Digest pk_digest{};
};

/// pk_digest over all public values in (bit_value, position) row-major order.
Digest public_key_digest(const LamportTable& public_key);

class MerkleLamportKeyset {
  public:
    unsigned height() const noexcept { return height_; }
    std::size_t capacity() const noexcept { return std::size_t{1} << height_; }
    const Digest& root() const noexcept { return levels_.back().front(); }
    std::size_t next_index() const noexcept { return next_index_; }
    const std::vector<bool>& used() const noexcept { return used_; }
    std::size_t remaining() const noexcept;
    const LamportKeypair& leaf(std::size_t index) const { return leaves_.at(index); }

    /// Sibling hashes from the leaf level upward.
    std::vector<Digest> auth_path(std::size_t index) const;

  private:
    friend MerkleLamportKeyset keygen(const entropy::Seed256& seed, unsigned height);
    friend struct SignAccess;

    unsigned height_ = 0;
    std::vector<LamportKeypair> leaves_;
    std::vector<std::vector<Digest>> levels_;  // levels_[0] = leaf digests, back() = {root}
    std::size_t next_index_ = 0;
    std::vector<bool> used_;
};

struct PQSignature {
    std::uint64_t leaf_index = 0;
    std::vector<Block> reveals;        // kBits entries
    std::vector<Digest> auth_path;     // height entries
    LamportTable leaf_public{};
};

MerkleLamportKeyset keygen(const entropy::Seed256& seed, unsigned height);

/// Signs with the next free leaf and consumes it. Throws KeyExhausted once all
/// 2^h leaves are spent.
PQSignature sign(MerkleLamportKeyset& keyset, std::span<const std::uint8_t> message);
PQSignature sign(MerkleLamportKeyset& keyset, std::string_view message);

/// Signs with a specific leaf. Throws ReuseForbidden if that leaf was used.
PQSignature sign_at(MerkleLamportKeyset& keyset, std::size_t leaf_index, std::span<const std::uint8_t> message);

/// Marks a leaf consumed without signing (state restoration after restart).
void mark_used(MerkleLamportKeyset& keyset, std::size_t leaf_index);

bool verify(const Digest& root, std::span<const std::uint8_t> message, const PQSignature& sig);
bool verify(const Digest& root, std::string_view message, const PQSignature& sig);

/// First 16 bytes of SHA-256("QFI-ID-v1" || root || seed || device_id), hex.
std::string derive_quantum_id(const Digest& root, const entropy::Seed256& seed, const std::string& device_id);

struct ArtifactMetadata {
    std::string backend = "local-emulation";
    std::string device_id;
    std::string execution_id;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    devices::EntropyClass entropy_class = devices::EntropyClass::Computed;
    devices::Status status = devices::Status::COMPLETED;
    std::string created_at;
};

struct Artifact {
    std::string artifact_id;
    std::string quantum_id;
    Digest public_root{};
    std::string message;
    PQSignature signature;
    ArtifactMetadata metadata;
};

struct ArtifactOptions {
    std::optional<std::string> artifact_id;
    std::optional<TimePoint> created_at;
};

/// Message: "QFI-ARTIFACT-v1|session=<id>|device=<id>|execution=<id>|quantum_id=<qid>".
/// Throws InvalidState unless the execution COMPLETED.
Artifact sign_artifact(const std::string& session_id, const std::string& device_id,
                       const devices::ExecutionRecord& execution, const entropy::Seed256& seed,
                       MerkleLamportKeyset& keyset, const ArtifactOptions& options = {});

bool verify_artifact(const Artifact& artifact);

json to_json(const PQSignature& sig);
PQSignature signature_from_json(const json& doc);
json to_json(const Artifact& artifact);
Artifact artifact_from_json(const json& doc);

}  // namespace qfi::pqsig
