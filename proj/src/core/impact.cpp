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

#include "impact.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace qfi::impact {

RegionTable load_regions(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        fail(ErrorCode::Config, std::string("region table does not parse: ") + e.what());
    }
    auto list = root["regions"];
    if (!list || !list.IsSequence()) fail(ErrorCode::Config, "region table needs a top-level 'regions' sequence");

    RegionTable out;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < list.size(); ++i) {
        RegionIntensity r;
        try {
            r.region_code = list[i]["region_code"].as<std::string>();
            r.grams_co2_per_kwh = list[i]["grams_co2_per_kwh"].as<double>();
        } catch (const YAML::Exception& e) {
            fail(ErrorCode::Config, "region #" + std::to_string(i) + ": " + e.what());
        }
        if (!(r.grams_co2_per_kwh >= 0.0)) {
            fail(ErrorCode::Config, "region '" + r.region_code + "': intensity must be nonnegative");
        }
        if (!seen.insert(r.region_code).second) fail(ErrorCode::Config, "region '" + r.region_code + "': duplicate");
        out.push_back(std::move(r));
    }
    return out;
}

RegionTable load_regions_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot open region table " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_regions(ss.str());
}

const RegionIntensity& find_region(const RegionTable& table, const std::string& code) {
    auto it = std::find_if(table.begin(), table.end(), [&](const auto& r) { return r.region_code == code; });
    if (it == table.end()) fail(ErrorCode::UnknownRegion, "unknown region '" + code + "'");
    return *it;
}

json to_json(const ImpactEstimate& e) {
    return {{"device_id", e.device_id},   {"duration_s", e.duration_s}, {"energy_kj", e.energy_kj},
            {"energy_kwh", e.energy_kwh}, {"region_code", e.region_code}, {"carbon_g", e.carbon_g}};
}

ImpactEstimate estimate(const devices::DeviceSpec& device, double duration_s, const RegionIntensity& region) {
    if (!(duration_s >= 0.0)) fail(ErrorCode::InvalidRequest, "duration must be nonnegative");
    ImpactEstimate e;
    e.device_id = device.id;
    e.duration_s = duration_s;
    e.energy_kj = device.power_kw * duration_s;
    e.energy_kwh = e.energy_kj / 3600.0;
    e.region_code = region.region_code;
    e.carbon_g = e.energy_kwh * region.grams_co2_per_kwh;
    return e;
}

std::vector<std::pair<std::string, ImpactEstimate>> compare_impact(const devices::Catalog& catalog,
                                                                   double duration_s,
                                                                   const RegionIntensity& region) {
    std::vector<std::pair<std::string, ImpactEstimate>> rows;
    rows.reserve(catalog.size());
    for (const auto& d : catalog) rows.emplace_back(d.id, estimate(d, duration_s, region));
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.second.carbon_g != b.second.carbon_g) return a.second.carbon_g < b.second.carbon_g;
        return a.first < b.first;
    });
    return rows;
}

}  // namespace qfi::impact
