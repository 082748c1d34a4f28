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

#include "entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qfi::entropy {

json to_json(const EntropyReport& r) {
    auto finite = [](double v) -> json {
        if (std::isfinite(v)) return v;
        return v > 0 ? "inf" : "-inf";
    };
    return {{"n_bits_raw", r.n_bits_raw},
            {"n_bits_debiased", r.n_bits_debiased},
            {"monobit_statistic", finite(r.monobit_statistic)},
            {"runs_statistic", finite(r.runs_statistic)},
            {"min_entropy_estimate", r.min_entropy_estimate},
            {"passed", r.passed}};
}

RawBits extract_bits(const qsim::MeasurementRecord& record, std::string origin) {
    if (record.outcomes.empty() || record.n_qubits == 0) {
        fail(ErrorCode::InsufficientEntropy, "measurement record holds no shots");
    }
    RawBits raw{{}, std::move(origin)};
    const unsigned n = record.n_qubits;
    raw.bits.reserve(record.outcomes.size() * n);
    for (auto o : record.outcomes) {
        for (unsigned q = 0; q < n; ++q) raw.bits.push_back(static_cast<std::uint8_t>((o >> (n - 1 - q)) & 1u));
    }
    return raw;
}

Bits von_neumann_debias(const Bits& raw) {
    Bits out;
    out.reserve(raw.size() / 4);
    for (std::size_t i = 0; i + 1 < raw.size(); i += 2) {
        if (raw[i] != raw[i + 1]) out.push_back(raw[i]);
    }
    return out;
}

Seed256 condition(const RawBits& raw, const std::string& device_id, const std::string& execution_id,
                  devices::EntropyClass entropy_class, std::size_t min_debiased_bits) {
    const auto debiased = von_neumann_debias(raw.bits);
    if (debiased.size() < min_debiased_bits) {
        fail(ErrorCode::InsufficientEntropy, std::to_string(debiased.size()) + " debiased bits, need " +
                                                 std::to_string(min_debiased_bits) + "; rerun with more shots");
    }
    Sha256 h;
    h.update(kSeedTag).update(device_id).update("|").update(execution_id).update(pack_bits(debiased));
    return {h.finish(), execution_id, entropy_class};
}

Keystream::Keystream(const Digest& seed) : seed_(seed) {}

void Keystream::refill() {
    const std::uint8_t ctr[4] = {static_cast<std::uint8_t>(counter_ >> 24), static_cast<std::uint8_t>(counter_ >> 16),
                                 static_cast<std::uint8_t>(counter_ >> 8), static_cast<std::uint8_t>(counter_)};
    block_ = Sha256().update(kExpandTag).update(seed_).update(ctr).finish();
    ++counter_;
    used_ = 0;
}

void Keystream::read(std::span<std::uint8_t> out) {
    std::size_t pos = 0;
    while (pos < out.size()) {
        if (used_ == block_.size()) refill();
        const std::size_t take = std::min(out.size() - pos, block_.size() - used_);
        std::copy_n(block_.begin() + static_cast<std::ptrdiff_t>(used_), take, out.begin() + static_cast<std::ptrdiff_t>(pos));
        used_ += take;
        pos += take;
    }
}

Bytes expand(const Seed256& seed, std::size_t n_bytes) {
    if (n_bytes == 0) fail(ErrorCode::InvalidRequest, "expand length must be positive");
    if (n_bytes > kMaxExpandBytes) fail(ErrorCode::InvalidRequest, "expand length exceeds 2^20 bytes");
    Bytes out(n_bytes);
    Keystream(seed.bytes).read(out);
    return out;
}

EntropyReport health_check(const Bits& bits) {
    const std::size_t n = bits.size();
    if (n < kMinHealthBits) {
        fail(ErrorCode::TooShort, "health check needs at least " + std::to_string(kMinHealthBits) + " bits, got " +
                                      std::to_string(n));
    }
    EntropyReport r;
    r.n_bits_raw = n;

    const auto ones = static_cast<double>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
    const auto zeros = static_cast<double>(n) - ones;
    const double dn = static_cast<double>(n);
    r.monobit_statistic = std::abs(ones - zeros) / std::sqrt(dn);

    // Wald-Wolfowitz runs test.
    std::size_t runs = 1;
    for (std::size_t i = 1; i < n; ++i) runs += bits[i] != bits[i - 1];
    const double pi1 = ones / dn;
    const double pi0 = zeros / dn;
    const double expected = 2.0 * dn * pi1 * pi0 + 1.0;
    const double variance = (expected - 1.0) * (expected - 2.0) / (dn - 1.0);
    const double delta = static_cast<double>(runs) - expected;
    if (variance > 0.0) {
        r.runs_statistic = delta / std::sqrt(variance);
    } else {
        // Constant input: one run is the only possibility.
        r.runs_statistic = delta == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), delta);
    }

    r.min_entropy_estimate = std::clamp(-std::log2(std::max(pi1, pi0)), 0.0, 1.0);
    r.passed = r.monobit_statistic <= kHealthThreshold && std::abs(r.runs_statistic) <= kHealthThreshold;
    return r;
}

}  // namespace qfi::entropy
