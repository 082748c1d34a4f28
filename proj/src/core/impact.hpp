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
#include "devices.hpp"

namespace qfi::impact {

struct RegionIntensity {
    std::string region_code;
    double grams_co2_per_kwh = 0.0;
};

using RegionTable = std::vector<RegionIntensity>;

/// YAML document with a top-level `regions:` sequence of
/// {region_code, grams_co2_per_kwh} mappings.
RegionTable load_regions(const std::string& yaml_text);
RegionTable load_regions_file(const std::string& path);
/// Throws UnknownRegion.
const RegionIntensity& find_region(const RegionTable& table, const std::string& code);

struct ImpactEstimate {
    std::string device_id;
    double duration_s = 0.0;
    double energy_kj = 0.0;
    double energy_kwh = 0.0;
    std::string region_code;
    double carbon_g = 0.0;
};

json to_json(const ImpactEstimate& e);

/// Operational electricity only: kJ = kW * s, kWh = kJ / 3600, g = kWh * g/kWh.
ImpactEstimate estimate(const devices::DeviceSpec& device, double duration_s, const RegionIntensity& region);

/// Ascending by carbon, ties by device id.
std::vector<std::pair<std::string, ImpactEstimate>> compare_impact(const devices::Catalog& catalog,
                                                                   double duration_s,
                                                                   const RegionIntensity& region);

/// Emulated wall time of one execution: latency plus a per-shot cost.
inline double execution_duration_s(const devices::DeviceSpec& device, std::uint64_t shots, double per_shot_cost_s) {
    return device.latency_ms / 1000.0 + static_cast<double>(shots) * per_shot_cost_s;
}

}  // namespace qfi::impact
