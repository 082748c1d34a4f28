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

#include "store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

namespace qfi::store {

void append_durable(const std::string& path, const std::string& data) {
    const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd < 0) fail(ErrorCode::Io, "cannot open " + path + ": " + std::strerror(errno));
    std::size_t done = 0;
    while (done < data.size()) {
        const auto n = ::write(fd, data.data() + done, data.size() - done);
        if (n < 0) {
            if (errno == EINTR) continue;
            const int err = errno;
            ::close(fd);
            fail(ErrorCode::Io, "write to " + path + " failed: " + std::strerror(err));
        }
        done += static_cast<std::size_t>(n);
    }
    if (::fsync(fd) != 0) {
        const int err = errno;
        ::close(fd);
        fail(ErrorCode::Io, "fsync of " + path + " failed: " + std::strerror(err));
    }
    ::close(fd);
}

void EventLog::append(const json& doc) {
    std::lock_guard lock(mu_);
    append_durable(path_, canonical(doc) + "\n");
}

std::vector<json> EventLog::replay() const {
    std::vector<json> out;
    std::ifstream in(path_, std::ios::binary);
    if (!in) return out;
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string data = ss.str();
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < data.size()) {
        const auto nl = data.find('\n', pos);
        if (nl == std::string::npos) break;  // unacknowledged tail
        ++line_no;
        auto doc = json::parse(data.begin() + static_cast<std::ptrdiff_t>(pos),
                               data.begin() + static_cast<std::ptrdiff_t>(nl), nullptr, false);
        if (doc.is_discarded()) fail(ErrorCode::Io, path_ + ":" + std::to_string(line_no) + ": malformed log line");
        out.push_back(std::move(doc));
        pos = nl + 1;
    }
    return out;
}

}  // namespace qfi::store
