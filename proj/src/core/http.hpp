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

#include <memory>
#include <string>

#include "gateway.hpp"

namespace httplib {
class Server;
}

namespace qfi::http {

/// Binds the gateway's routes onto an HTTP/1.1 listener. Errors leave as
/// {"code", "message"} documents with the status from gateway::http_status.
class HttpServer {
  public:
    explicit HttpServer(gateway::Gateway& gateway);
    ~HttpServer();

    /// Binds `host:port` (port 0 picks a free one) and returns the bound port.
    int bind(const std::string& host, int port);
    /// Serves until stop(); blocks.
    void run();
    void stop();

  private:
    void routes();

    gateway::Gateway& gateway_;
    std::unique_ptr<httplib::Server> server_;
};

}  // namespace qfi::http
