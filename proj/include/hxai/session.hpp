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


// The hypothesis-first interaction: a clinician names a class for a record
// and gets back evidence anchored to that class (similar cases, one
// counterexample list per alternate class, optional importance). The bundle
// carries no model recommendation.

#ifndef HXAI_SESSION_HPP_
#define HXAI_SESSION_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hxai/classifier.hpp"
#include "hxai/counterfactual.hpp"
#include "hxai/surrogate.hpp"
#include "hxai/tabular.hpp"
#include "json.hpp"

namespace hxai {

struct ExplanationCounts {
  int n_counterexamples_per_class = 0;
  int n_similar_cases = 0;
  bool operator==(const ExplanationCounts&) const = default;
};

// Negative gets fewer examples than the two disease classes.
ExplanationCounts default_counts(ClassLabel hypothesis);

struct HypothesisRequest {
  // Exactly one of record_id / record is set.
  std::optional<std::string> record_id;
  std::optional<Record> record;
  ClassLabel hypothesis;
  std::optional<int> n_counterexamples_per_class;  // [0, 10]
  std::optional<int> n_similar_cases;              // [0, 10]
  bool include_importance = false;
  std::optional<std::uint64_t> seed;
  // Set by investigate_another_hypothesis when the class did not change.
  bool repeat = false;

  bool operator==(const HypothesisRequest&) const = default;
};

// Throws Error(kInvalidCount) for a count outside [0,10] and
// Error(kValidation) unless exactly one record source is given.
void validate_request(const HypothesisRequest& req);

struct ExampleList {
  std::vector<Counterexample> items;
  std::size_t requested = 0;
  bool budget_exhausted = false;
};

struct ExplanationBundle {
  std::string record_id;
  bool inline_record = false;
  Record record;
  ClassLabel hypothesis;
  ExampleList similar_cases;
  // Keyed by the two alternate classes, ascending.
  std::vector<std::pair<ClassLabel, ExampleList>> counterexamples;
  std::optional<ImportanceVector> importance;
  std::string model_fingerprint;
  std::uint64_t seed = 0;
};

// Everything a request needs, loaded once and shared read-only.
struct Engine {
  DatasetSchema schema;
  std::shared_ptr<const Classifier> model;
  LabeledDataset data;
  FeatureStats stats;
  DistanceProfile profile;
  PerturbationConfig perturbation;
  int population_size = 200;
  int generations = 50;

  // Computes stats and the distance profile from `data`.
  Engine(std::shared_ptr<const Classifier> model, LabeledDataset data);
};

class SessionLog;

// Fills absent counts from default_counts and an absent seed from the
// system entropy source (recorded in the bundle). Appends to `log` if given.
ExplanationBundle handle_request(const HypothesisRequest& req, const Engine& engine,
                                 SessionLog* log = nullptr);

HypothesisRequest investigate_another_hypothesis(const ExplanationBundle& previous,
                                                 ClassLabel new_hypothesis);

// JSON forms. Field names are snake_case; feature lists follow display order.
nlohmann::json request_to_json(const HypothesisRequest& req, const DatasetSchema& schema);
// Throws Error(kInvalidClass) / Error(kInvalidCount) / Error(kValidation).
HypothesisRequest request_from_json(const nlohmann::json& doc, const DatasetSchema& schema);
nlohmann::json bundle_to_json(const ExplanationBundle& bundle, const DatasetSchema& schema);
nlohmann::json record_to_json(const Record& record, const DatasetSchema& schema);
Record record_from_json(const nlohmann::json& doc, const DatasetSchema& schema);
// Canonical text; identical bundles give identical bytes.
std::string bundle_text(const ExplanationBundle& bundle, const DatasetSchema& schema);

// Short digest used by the session log: counts, flags and a hash of the
// full bundle text.
nlohmann::json bundle_summary(const ExplanationBundle& bundle, const DatasetSchema& schema);

struct SessionEntry {
  std::string timestamp;  // UTC, ISO 8601
  nlohmann::json request;
  nlohmann::json summary;
  double elapsed_ms = 0.0;
};

// Append-only, one JSON document per line when backed by a file.
class SessionLog {
 public:
  SessionLog() = default;
  // Appends to `path`, creating it if needed. Existing lines are loaded.
  explicit SessionLog(const std::filesystem::path& path);

  void append(SessionEntry entry);
  std::vector<SessionEntry> entries() const;
  std::size_t size() const;
  nlohmann::json to_json() const;

 private:
  mutable std::mutex mu_;
  std::vector<SessionEntry> entries_;
  std::optional<std::filesystem::path> path_;
  std::ofstream out_;
};

std::vector<SessionEntry> read_session_log(const std::filesystem::path& path);

struct ReplayResult {
  std::size_t replayed = 0;
  std::vector<std::size_t> mismatches;  // entry indices
};

// Re-runs each logged request with its recorded seed and compares summaries.
ReplayResult replay(const std::vector<SessionEntry>& entries, const Engine& engine);

}  // namespace hxai

#endif  // HXAI_SESSION_HPP_
