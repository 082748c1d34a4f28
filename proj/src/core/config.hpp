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

#include "devices.hpp"
#include "impact.hpp"

namespace qfi::config {

/// Service settings. Loaded from a YAML file; relative catalog/region paths
/// resolve against the directory holding that file.
struct Config {
    std::string addr = "127.0.0.1:8080";
    std::string data_dir = "./data";
    std::string catalog_path = "devices.yaml";
    std::string regions_path = "regions.yaml";
    std::string default_region = "us-east-1";
    std::uint64_t default_shots = 10000;
    unsigned default_qubits = 8;
    unsigned default_height = 4;
    double default_excitation_bias = 0.5;
    double default_duration_s = 2.0;
    double per_shot_cost_s = 0.0005;
    std::size_t min_debiased_bits = 512;
    bool real_latency = false;
};

Config load_config(const std::string& path);
/// QFI_ADDR and QFI_DATA_DIR override the file values.
void apply_env_overrides(Config& cfg);
/// Path named by QFI_CONFIG, else `fallback`.
std::string resolve_config_path(const std::string& fallback);

/// Splits "host:port"; throws Config on a malformed address.
std::pair<std::string, int> split_addr(const std::string& addr);

struct Environment {
    Config config;
    devices::Catalog catalog;
    impact::RegionTable regions;
};

Environment load_environment(const std::string& config_path);

}  // namespace qfi::config
