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


// HTTP+JSON front end over the session engine.
//
//   GET  /health          {"status":"ok","model_fingerprint":...}
//   GET  /classes         class list with default counts
//   GET  /records/{id}    one dataset record, display order
//   POST /explain         HypothesisRequest in, ExplanationBundle out
//   GET  /session         the session log
//
// Errors are {"error":{"code":...,"message":...}} with a 4xx/5xx status.

#ifndef HXAI_SERVICE_HPP_
#define HXAI_SERVICE_HPP_

#include <memory>
#include <string>

#include "hxai/error.hpp"
#include "hxai/session.hpp"

namespace hxai {

// HTTP status for an error code.
int http_status(ErrorCode code);

class ExplainService {
 public:
  ExplainService(std::shared_ptr<const Engine> engine, std::shared_ptr<SessionLog> log);
  ~ExplainService();
  ExplainService(const ExplainService&) = delete;
  ExplainService& operator=(const ExplainService&) = delete;

  // Returns the bound port; throws Error(kIo) when the address is taken.
  int bind(const std::string& host, int port);
  int bind_any_port(const std::string& host);
  // Blocks until stop().
  void listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string model_path;
  std::string data_path;
  std::string log_path;
  std::string schema_path;  // empty: built-in schema
};

// HXAI_LISTEN (host:port) replaces host and port; HXAI_MODEL, HXAI_DATA,
// HXAI_LOG and HXAI_SCHEMA fill the matching path when it is empty.
void apply_environment(ServiceConfig& config);

}  // namespace hxai

#endif  // HXAI_SERVICE_HPP_
