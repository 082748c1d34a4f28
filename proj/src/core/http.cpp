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

#include "http.hpp"

#include <httplib.h>

namespace qfi::http {

namespace {

void send(httplib::Response& res, int status, const json& doc) {
    res.status = status;
    res.set_content(canonical(doc), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message) {
    send(res, status, {{"code", code}, {"message", message}});
}

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    auto doc = json::parse(req.body, nullptr, false);
    if (doc.is_discarded()) throw std::invalid_argument("request body is not valid JSON");
    return doc;
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
        try {
            send(res, 200, fn(req));
        } catch (const Error& e) {
            send_error(res, gateway::http_status(e.code()), error_code_name(e.code()), e.what());
        } catch (const std::invalid_argument& e) {
            send_error(res, 400, "bad_request", e.what());
        } catch (const std::exception& e) {
            send_error(res, 500, "internal_error", e.what());
        }
    };
}

std::uint64_t query_u64(const httplib::Request& req, const char* key, std::uint64_t fallback) {
    if (!req.has_param(key)) return fallback;
    const auto raw = req.get_param_value(key);
    try {
        std::size_t used = 0;
        const auto v = std::stoull(raw, &used);
        if (used != raw.size()) throw std::invalid_argument(key);
        return v;
    } catch (const std::exception&) {
        fail(ErrorCode::Validation, std::string("query parameter '") + key + "' must be a nonnegative integer");
    }
}

}  // namespace

HttpServer::HttpServer(gateway::Gateway& gateway)
    : gateway_(gateway), server_(std::make_unique<httplib::Server>()) {
    routes();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::routes() {
    auto& g = gateway_;
    auto& s = *server_;

    s.Post("/api/session", guarded([&g](const httplib::Request&) { return g.create_session(); }));
    s.Get(R"(/api/session/([^/]+))",
          guarded([&g](const httplib::Request& r) { return g.get_session(r.matches[1]); }));
    s.Post(R"(/api/session/([^/]+)/page)",
           guarded([&g](const httplib::Request& r) { return g.change_page(r.matches[1], parse_body(r)); }));
    s.Post(R"(/api/session/([^/]+)/consent)",
           guarded([&g](const httplib::Request& r) { return g.record_consent(r.matches[1], parse_body(r)); }));
    s.Post(R"(/api/session/([^/]+)/sentiment)",
           guarded([&g](const httplib::Request& r) { return g.submit_sentiment(r.matches[1], parse_body(r)); }));
    s.Post(R"(/api/session/([^/]+)/vote)",
           guarded([&g](const httplib::Request& r) { return g.cast_vote(r.matches[1], parse_body(r)); }));
    s.Post(R"(/api/session/([^/]+)/execute)",
           guarded([&g](const httplib::Request& r) { return g.execute(r.matches[1], parse_body(r)); }));
    s.Post(R"(/api/session/([^/]+)/artifact)",
           guarded([&g](const httplib::Request& r) { return g.generate_artifact(r.matches[1], parse_body(r)); }));

    s.Get("/api/sentiment/aggregate", guarded([&g](const httplib::Request& r) {
              return g.sentiment_aggregate(query_u64(r, "k", 25));
          }));
    s.Get("/api/votes/tally", guarded([&g](const httplib::Request&) { return g.vote_tally(); }));
    s.Get("/api/devices", guarded([&g](const httplib::Request& r) {
              std::optional<std::string> region;
              if (r.has_param("region")) region = r.get_param_value("region");
              return g.list_devices(region);
          }));
    s.Get("/api/vulnerability", guarded([&g](const httplib::Request&) { return g.vulnerability(); }));

    s.Get(R"(/api/execution/([^/]+))",
          guarded([&g](const httplib::Request& r) { return g.get_execution(r.matches[1]); }));
    s.Get(R"(/api/artifact/([^/]+)/verify)",
          guarded([&g](const httplib::Request& r) { return g.verify_artifact(r.matches[1]); }));
    s.Get(R"(/api/artifact/([^/]+))",
          guarded([&g](const httplib::Request& r) { return g.get_artifact(r.matches[1]); }));

    s.Get("/api/ledger", guarded([&g](const httplib::Request& r) {
              return g.ledger_entries(query_u64(r, "offset", 0), query_u64(r, "limit", 100));
          }));
    s.Get("/api/ledger/verify", guarded([&g](const httplib::Request&) { return g.ledger_verify(); }));

    s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.body.empty()) send_error(res, res.status, "not_found", "no such route");
    });
}

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) return server_->bind_to_any_port(host);
    if (!server_->bind_to_port(host, port)) return -1;
    return port;
}

void HttpServer::run() { server_->listen_after_bind(); }

void HttpServer::stop() {
    if (server_ && server_->is_running()) server_->stop();
}

}  // namespace qfi::http
