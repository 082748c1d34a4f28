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

#include "pqsig.hpp"

#include <algorithm>

namespace qfi::pqsig {

namespace {

Digest hash_pair(const Digest& left, const Digest& right) {
    return Sha256().update(left).update(right).finish();
}

bool digest_bit(const Digest& d, std::size_t i) { return (d[i / 8] >> (7 - i % 8)) & 1u; }

}  // namespace

Digest public_key_digest(const LamportTable& public_key) {
    Sha256 h;
    for (const auto& row : public_key) {
        for (const auto& block : row) h.update(block);
    }
    return h.finish();
}

std::size_t MerkleLamportKeyset::remaining() const noexcept {
    return static_cast<std::size_t>(std::count(used_.begin(), used_.end(), false));
}

std::vector<Digest> MerkleLamportKeyset::auth_path(std::size_t index) const {
    if (index >= capacity()) fail(ErrorCode::InvalidRequest, "leaf index out of range");
    std::vector<Digest> path;
    path.reserve(height_);
    for (unsigned level = 0; level < height_; ++level) {
        path.push_back(levels_[level][index ^ 1u]);
        index >>= 1;
    }
    return path;
}

MerkleLamportKeyset keygen(const entropy::Seed256& seed, unsigned height) {
    if (height < kMinHeight || height > kMaxHeight) {
        fail(ErrorCode::HeightOutOfRange, "tree height must lie in [1,10], got " + std::to_string(height));
    }
    MerkleLamportKeyset ks;
    ks.height_ = height;
    ks.leaves_.resize(ks.capacity());
    ks.used_.assign(ks.capacity(), false);

    entropy::Keystream stream(seed.bytes);
    std::vector<Digest> level;
    level.reserve(ks.capacity());
    for (auto& leaf : ks.leaves_) {
        for (std::size_t b = 0; b < 2; ++b) {
            for (std::size_t i = 0; i < kBits; ++i) {
                stream.read(leaf.secret[b][i]);
                leaf.public_key[b][i] = sha256(leaf.secret[b][i]);
            }
        }
        leaf.pk_digest = public_key_digest(leaf.public_key);
        level.push_back(leaf.pk_digest);
    }

    ks.levels_.push_back(std::move(level));
    while (ks.levels_.back().size() > 1) {
        const auto& below = ks.levels_.back();
        std::vector<Digest> up;
        up.reserve(below.size() / 2);
        for (std::size_t i = 0; i < below.size(); i += 2) up.push_back(hash_pair(below[i], below[i + 1]));
        ks.levels_.push_back(std::move(up));
    }
    return ks;
}

struct SignAccess {
    static void consume(MerkleLamportKeyset& ks, std::size_t index) {
        ks.used_[index] = true;
        while (ks.next_index_ < ks.capacity() && ks.used_[ks.next_index_]) ++ks.next_index_;
    }
};

void mark_used(MerkleLamportKeyset& keyset, std::size_t leaf_index) {
    if (leaf_index >= keyset.capacity()) fail(ErrorCode::InvalidRequest, "leaf index out of range");
    SignAccess::consume(keyset, leaf_index);
}

PQSignature sign_at(MerkleLamportKeyset& keyset, std::size_t leaf_index, std::span<const std::uint8_t> message) {
    if (leaf_index >= keyset.capacity()) {
        fail(ErrorCode::InvalidRequest, "leaf index " + std::to_string(leaf_index) + " out of range");
    }
    if (keyset.used()[leaf_index]) {
        fail(ErrorCode::ReuseForbidden, "one-time key " + std::to_string(leaf_index) + " was already used");
    }
    const auto digest = sha256(message);
    const auto& leaf = keyset.leaf(leaf_index);

    PQSignature sig;
    sig.leaf_index = leaf_index;
    sig.reveals.reserve(kBits);
    for (std::size_t i = 0; i < kBits; ++i) sig.reveals.push_back(leaf.secret[digest_bit(digest, i)][i]);
    sig.auth_path = keyset.auth_path(leaf_index);
    sig.leaf_public = leaf.public_key;

    SignAccess::consume(keyset, leaf_index);
    return sig;
}

PQSignature sign(MerkleLamportKeyset& keyset, std::span<const std::uint8_t> message) {
    if (keyset.next_index() >= keyset.capacity()) {
        fail(ErrorCode::KeyExhausted, "all " + std::to_string(keyset.capacity()) + " one-time keys are used");
    }
    return sign_at(keyset, keyset.next_index(), message);
}

namespace {
std::span<const std::uint8_t> as_bytes(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}
}  // namespace

PQSignature sign(MerkleLamportKeyset& keyset, std::string_view message) { return sign(keyset, as_bytes(message)); }

bool verify(const Digest& root, std::span<const std::uint8_t> message, const PQSignature& sig) {
    const std::size_t height = sig.auth_path.size();
    if (sig.reveals.size() != kBits || height < kMinHeight || height > kMaxHeight) return false;
    if (sig.leaf_index >= (std::uint64_t{1} << height)) return false;

    const auto digest = sha256(message);
    for (std::size_t i = 0; i < kBits; ++i) {
        if (sha256(sig.reveals[i]) != sig.leaf_public[digest_bit(digest, i)][i]) return false;
    }

    Digest node = public_key_digest(sig.leaf_public);
    auto index = sig.leaf_index;
    for (const auto& sibling : sig.auth_path) {
        node = (index & 1u) ? hash_pair(sibling, node) : hash_pair(node, sibling);
        index >>= 1;
    }
    return node == root;
}

bool verify(const Digest& root, std::string_view message, const PQSignature& sig) {
    return verify(root, as_bytes(message), sig);
}

std::string derive_quantum_id(const Digest& root, const entropy::Seed256& seed, const std::string& device_id) {
    const auto d = Sha256().update("QFI-ID-v1").update(root).update(seed.bytes).update(device_id).finish();
    return to_hex(std::span(d).first(16));
}

Artifact sign_artifact(const std::string& session_id, const std::string& device_id,
                       const devices::ExecutionRecord& execution, const entropy::Seed256& seed,
                       MerkleLamportKeyset& keyset, const ArtifactOptions& options) {
    if (execution.status != devices::Status::COMPLETED || !execution.result) {
        fail(ErrorCode::InvalidState, "execution " + execution.execution_id + " is " +
                                          devices::to_string(execution.status) + ", not COMPLETED");
    }
    Artifact a;
    a.artifact_id = options.artifact_id.value_or(uuid_v4());
    a.public_root = keyset.root();
    a.quantum_id = derive_quantum_id(a.public_root, seed, device_id);
    a.message = "QFI-ARTIFACT-v1|session=" + session_id + "|device=" + device_id +
                "|execution=" + execution.execution_id + "|quantum_id=" + a.quantum_id;
    a.signature = sign(keyset, a.message);
    a.metadata.device_id = device_id;
    a.metadata.execution_id = execution.execution_id;
    a.metadata.shots = execution.shots;
    a.metadata.seed = execution.seed;
    a.metadata.entropy_class = execution.entropy_class;
    a.metadata.status = execution.status;
    a.metadata.created_at = format_rfc3339(options.created_at.value_or(now_ms()));
    return a;
}

bool verify_artifact(const Artifact& artifact) {
    return verify(artifact.public_root, artifact.message, artifact.signature);
}

namespace {

json blocks_json(std::span<const Block> blocks) {
    json arr = json::array();
    for (const auto& b : blocks) arr.push_back(to_hex(b));
    return arr;
}

std::vector<Block> blocks_from(const json& arr) {
    std::vector<Block> out;
    for (const auto& v : arr) out.push_back(from_hex_fixed<32>(v.get<std::string>()));
    return out;
}

}  // namespace

json to_json(const PQSignature& sig) {
    return {{"leaf_index", sig.leaf_index},
            {"reveals", blocks_json(sig.reveals)},
            {"auth_path", blocks_json(sig.auth_path)},
            {"leaf_public", json::array({blocks_json(sig.leaf_public[0]), blocks_json(sig.leaf_public[1])})}};
}

PQSignature signature_from_json(const json& doc) {
    try {
        PQSignature sig;
        sig.leaf_index = doc.at("leaf_index").get<std::uint64_t>();
        sig.reveals = blocks_from(doc.at("reveals"));
        sig.auth_path = blocks_from(doc.at("auth_path"));
        const auto& pub = doc.at("leaf_public");
        if (pub.size() != 2) fail(ErrorCode::Validation, "leaf_public must have two rows");
        for (std::size_t b = 0; b < 2; ++b) {
            auto row = blocks_from(pub[b]);
            if (row.size() != kBits) fail(ErrorCode::Validation, "leaf_public row must hold 256 values");
            std::copy(row.begin(), row.end(), sig.leaf_public[b].begin());
        }
        return sig;
    } catch (const json::exception& e) {
        fail(ErrorCode::Validation, std::string("malformed signature: ") + e.what());
    }
}

json to_json(const Artifact& a) {
    const auto& m = a.metadata;
    return {{"artifact_id", a.artifact_id},
            {"quantum_id", a.quantum_id},
            {"public_root", to_hex(a.public_root)},
            {"message", a.message},
            {"signature", to_json(a.signature)},
            {"metadata",
             {{"backend", m.backend},
              {"device_id", m.device_id},
              {"execution_id", m.execution_id},
              {"shots", m.shots},
              {"seed", m.seed},
              {"entropy_class", devices::to_string(m.entropy_class)},
              {"status", devices::to_string(m.status)},
              {"created_at", m.created_at}}}};
}

Artifact artifact_from_json(const json& doc) {
    try {
        Artifact a;
        a.artifact_id = doc.at("artifact_id").get<std::string>();
        a.quantum_id = doc.at("quantum_id").get<std::string>();
        a.public_root = from_hex_fixed<32>(doc.at("public_root").get<std::string>());
        a.message = doc.at("message").get<std::string>();
        a.signature = signature_from_json(doc.at("signature"));
        const auto& m = doc.at("metadata");
        a.metadata.backend = m.at("backend").get<std::string>();
        a.metadata.device_id = m.at("device_id").get<std::string>();
        a.metadata.execution_id = m.at("execution_id").get<std::string>();
        a.metadata.shots = m.at("shots").get<std::uint64_t>();
        a.metadata.seed = m.at("seed").get<std::uint64_t>();
        a.metadata.entropy_class = devices::parse_entropy_class(m.at("entropy_class").get<std::string>());
        a.metadata.status = devices::parse_status(m.at("status").get<std::string>());
        a.metadata.created_at = m.at("created_at").get<std::string>();
        return a;
    } catch (const json::exception& e) {
        fail(ErrorCode::Validation, std::string("malformed artifact: ") + e.what());
    }
}

}  // namespace qfi::pqsig
