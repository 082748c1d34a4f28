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

#include <mutex>
#include <string>
#include <vector>

#include "common.hpp"

namespace qfi::store {

/// Appends `data` and fsyncs before returning. Throws Io.
void append_durable(const std::string& path, const std::string& data);

/// Append-only JSON-lines event log. Each record is written with one write()
/// and fsync'd, so after a crash only the final line can be incomplete;
/// replay drops such a tail since it was never acknowledged.
class EventLog {
  public:
    explicit EventLog(std::string path) : path_(std::move(path)) {}

    void append(const json& doc);
    /// Throws Io on a malformed complete line.
    std::vector<json> replay() const;
    const std::string& path() const noexcept { return path_; }

  private:
    std::string path_;
    std::mutex mu_;
};

}  // namespace qfi::store
