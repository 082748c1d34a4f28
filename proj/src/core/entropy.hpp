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

#include <cstdint>
#include <string>
#include <vector>

#include "common.hpp"
#include "devices.hpp"
#include "qsim.hpp"

namespace qfi::entropy {

using Bits = std::vector<std::uint8_t>;  // one 0/1 value per element

inline constexpr std::size_t kMinDebiasedBits = 512;
inline constexpr std::size_t kMaxExpandBytes = std::size_t{1} << 20;
inline constexpr std::size_t kMinHealthBits = 100;
inline constexpr double kHealthThreshold = 3.0;

inline constexpr std::string_view kSeedTag = "QFI-SEED-v1";
inline constexpr std::string_view kExpandTag = "QFI-EXPAND-v1";

struct RawBits {
    Bits bits;
    std::string origin;  // execution id
};

struct Seed256 {
    Digest bytes{};
    std::string source_execution;
    devices::EntropyClass entropy_class = devices::EntropyClass::Computed;
};

struct EntropyReport {
    std::size_t n_bits_raw = 0;
    std::size_t n_bits_debiased = 0;
    double monobit_statistic = 0.0;
    double runs_statistic = 0.0;
    double min_entropy_estimate = 0.0;
    bool passed = false;
};

json to_json(const EntropyReport& r);

/// Shot-major; within a shot, qubit 0 (leftmost character) first.
RawBits extract_bits(const qsim::MeasurementRecord& record, std::string origin);

/// Disjoint pairs left to right: 01 -> 0, 10 -> 1, 00/11 dropped.
Bits von_neumann_debias(const Bits& raw);

/// SHA-256(kSeedTag || device_id || "|" || execution_id || packed debiased bits).
/// Throws InsufficientEntropy when fewer than `min_debiased_bits` survive.
Seed256 condition(const RawBits& raw, const std::string& device_id, const std::string& execution_id,
                  devices::EntropyClass entropy_class, std::size_t min_debiased_bits = kMinDebiasedBits);

/// Counter-mode keystream: block k = SHA-256(kExpandTag || seed || be32(k)).
/// Streams without a length cap; `expand` is the bounded public form.
class Keystream {
  public:
    explicit Keystream(const Digest& seed);
    void read(std::span<std::uint8_t> out);

  private:
    void refill();

    Digest seed_;
    std::uint32_t counter_ = 0;
    Digest block_{};
    std::size_t used_ = sizeof(Digest);
};

Bytes expand(const Seed256& seed, std::size_t n_bytes);

/// Monobit, runs and most-common-value statistics on `bits`. The debiased
/// count in the report is left for the caller to fill.
EntropyReport health_check(const Bits& bits);

}  // namespace qfi::entropy
