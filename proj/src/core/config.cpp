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

#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdlib>
#include <filesystem>

namespace qfi::config {

namespace fs = std::filesystem;

Config load_config(const std::string& path) {
    YAML::Node root;
    try {
        root = YAML::LoadFile(path);
    } catch (const YAML::BadFile&) {
        fail(ErrorCode::Io, "cannot open config " + path);
    } catch (const YAML::Exception& e) {
        fail(ErrorCode::Config, "config " + path + " does not parse: " + e.what());
    }

    Config c;
    try {
        if (auto v = root["addr"]) c.addr = v.as<std::string>();
        if (auto v = root["data_dir"]) c.data_dir = v.as<std::string>();
        if (auto v = root["catalog"]) c.catalog_path = v.as<std::string>();
        if (auto v = root["regions"]) c.regions_path = v.as<std::string>();
        if (auto v = root["default_region"]) c.default_region = v.as<std::string>();
        if (auto v = root["default_shots"]) c.default_shots = v.as<std::uint64_t>();
        if (auto v = root["default_qubits"]) c.default_qubits = v.as<unsigned>();
        if (auto v = root["default_height"]) c.default_height = v.as<unsigned>();
        if (auto v = root["default_excitation_bias"]) c.default_excitation_bias = v.as<double>();
        if (auto v = root["default_duration_s"]) c.default_duration_s = v.as<double>();
        if (auto v = root["per_shot_cost_s"]) c.per_shot_cost_s = v.as<double>();
        if (auto v = root["min_debiased_bits"]) c.min_debiased_bits = v.as<std::size_t>();
        if (auto v = root["real_latency"]) c.real_latency = v.as<bool>();
    } catch (const YAML::Exception& e) {
        fail(ErrorCode::Config, "config " + path + ": " + e.what());
    }

    const auto base = fs::path(path).parent_path();
    auto resolve = [&](std::string& p) {
        if (!p.empty() && fs::path(p).is_relative()) p = (base / p).lexically_normal().string();
    };
    resolve(c.catalog_path);
    resolve(c.regions_path);
    return c;
}

void apply_env_overrides(Config& cfg) {
    if (const char* v = std::getenv("QFI_ADDR"); v && *v) cfg.addr = v;
    if (const char* v = std::getenv("QFI_DATA_DIR"); v && *v) cfg.data_dir = v;
}

std::string resolve_config_path(const std::string& fallback) {
    if (const char* v = std::getenv("QFI_CONFIG"); v && *v) return v;
    return fallback;
}

std::pair<std::string, int> split_addr(const std::string& addr) {
    const auto colon = addr.rfind(':');
    if (colon == std::string::npos || colon == 0) fail(ErrorCode::Config, "address must be host:port, got " + addr);
    try {
        std::size_t used = 0;
        const int port = std::stoi(addr.substr(colon + 1), &used);
        if (used != addr.size() - colon - 1 || port < 0 || port > 65535) throw std::out_of_range("port");
        return {addr.substr(0, colon), port};
    } catch (const std::exception&) {
        fail(ErrorCode::Config, "bad port in address " + addr);
    }
}

Environment load_environment(const std::string& config_path) {
    Environment env;
    env.config = load_config(config_path);
    apply_env_overrides(env.config);
    env.catalog = devices::load_catalog_file(env.config.catalog_path);
    env.regions = impact::load_regions_file(env.config.regions_path);
    return env;
}

}  // namespace qfi::config
