// Copyright 2026 The hxai Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "hxai/service.hpp"

#include <chrono>
#include <cstdlib>

#include "httplib.h"
#include "hxai/error.hpp"

namespace hxai {

using nlohmann::json;

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kValidation:
    case ErrorCode::kInvalidClass:
    case ErrorCode::kInvalidCount:
    case ErrorCode::kParse:
    case ErrorCode::kSchemaMismatch:
      return 400;
    case ErrorCode::kPrecondition:
    case ErrorCode::kEmptyDataset:
      return 422;
    default:
      return 500;
  }
}

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code,
                const std::string& message) {
  send_json(res, status, {{"error", {{"code", std::string(code)}, {"message", message}}}});
}

}  // namespace

struct ExplainService::Impl {
  std::shared_ptr<const Engine> engine;
  std::shared_ptr<SessionLog> log;
  httplib::Server server;

  void routes() {
    server.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200,
                {{"status", "ok"},
                 {"model_fingerprint", engine->model->schema_fingerprint()},
                 {"records", engine->data.size()}});
    });
    server.Get("/classes", [this](const httplib::Request&, httplib::Response& res) {
      json list = json::array();
      for (int c = 0; c < static_cast<int>(kNumClasses); ++c) {
        const auto d = default_counts(ClassLabel(c));
        list.push_back({{"index", c},
                        {"name", engine->schema.class_name(ClassLabel(c))},
                        {"default_n_counterexamples_per_class", d.n_counterexamples_per_class},
                        {"default_n_similar_cases", d.n_similar_cases}});
      }
      send_json(res, 200, {{"classes", std::move(list)}, {"max_count", kMaxExplanations}});
    });
    server.Get(R"(/records/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      const auto idx = engine->data.find(id);
      if (!idx) {
        send_error(res, 404, to_string(ErrorCode::kNotFound), "record not found: " + id);
        return;
      }
      send_json(res, 200, record_to_json(engine->data.records[*idx], engine->schema));
    });
    server.Post("/explain", [this](const httplib::Request& req, httplib::Response& res) {
      json body;
      try {
        body = json::parse(req.body);
      } catch (const json::exception& e) {
        send_error(res, 400, to_string(ErrorCode::kParse),
                   std::string("request body is not JSON: ") + e.what());
        return;
      }
      const auto started = std::chrono::steady_clock::now();
      const auto request = request_from_json(body, engine->schema);
      const auto bundle = handle_request(request, *engine, log.get());
      const double ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
              .count();
      res.set_header("X-Hxai-Elapsed-Ms", std::to_string(ms));
      res.status = 200;
      res.set_content(bundle_text(bundle, engine->schema), "application/json");
    });
    server.Get("/session", [this](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, log->to_json());
    });
    server.set_exception_handler(
        [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
          try {
            std::rethrow_exception(ep);
          } catch (const Error& e) {
            send_error(res, http_status(e.code()), to_string(e.code()), e.what());
          } catch (const std::exception& e) {
            send_error(res, 500, "internal", e.what());
          }
        });
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (!res.body.empty()) return;
      send_error(res, res.status, res.status == 404 ? "no_route" : "http_error",
                 "status " + std::to_string(res.status));
    });
  }
};

ExplainService::ExplainService(std::shared_ptr<const Engine> engine,
                               std::shared_ptr<SessionLog> log)
    : impl_(std::make_unique<Impl>()) {
  if (!engine) throw Error(ErrorCode::kPrecondition, "service needs an engine");
  impl_->engine = std::move(engine);
  impl_->log = log ? std::move(log) : std::make_shared<SessionLog>();
  // httplib defaults to SO_REUSEPORT, which would let a second server share
  // a port silently. Keep only SO_REUSEADDR so a taken port is an error.
  impl_->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
  });
  impl_->routes();
}

ExplainService::~ExplainService() { stop(); }

int ExplainService::bind(const std::string& host, int port) {
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorCode::kIo, "cannot listen on " + host + ":" + std::to_string(port));
  }
  return port;
}

int ExplainService::bind_any_port(const std::string& host) {
  const int port = impl_->server.bind_to_any_port(host);
  if (port < 0) throw Error(ErrorCode::kIo, "cannot bind " + host);
  return port;
}

void ExplainService::listen() { impl_->server.listen_after_bind(); }

void ExplainService::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

void ExplainService::wait_until_ready() const { impl_->server.wait_until_ready(); }

void apply_environment(ServiceConfig& config) {
  auto env = [](const char* name) -> std::string {
    const char* v = std::getenv(name);
    return v ? v : "";
  };
  if (const auto listen = env("HXAI_LISTEN"); !listen.empty()) {
    const auto colon = listen.rfind(':');
    if (colon == std::string::npos) {
      throw Error(ErrorCode::kValidation, "HXAI_LISTEN must be host:port");
    }
    config.host = listen.substr(0, colon);
    try {
      config.port = std::stoi(listen.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kValidation, "HXAI_LISTEN has a bad port: " + listen);
    }
  }
  if (config.model_path.empty()) config.model_path = env("HXAI_MODEL");
  if (config.data_path.empty()) config.data_path = env("HXAI_DATA");
  if (config.log_path.empty()) config.log_path = env("HXAI_LOG");
  if (config.schema_path.empty()) config.schema_path = env("HXAI_SCHEMA");
}

}  // namespace hxai
