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


#include "hxai/session.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <random>
#include <sstream>

#include "hxai/error.hpp"
#include "hxai/rng.hpp"

namespace hxai {

using nlohmann::json;

namespace {

constexpr std::uint64_t kSimilarSalt = 1;
constexpr std::uint64_t kImportanceSalt = 2;
constexpr std::uint64_t kCounterexampleSalt = 16;

void check_count(const std::optional<int>& n, const char* field) {
  if (n && (*n < 0 || *n > kMaxExplanations)) {
    throw Error(ErrorCode::kInvalidCount, std::string(field) + " must be in [0, 10], got " +
                                              std::to_string(*n));
  }
}

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()) % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                static_cast<int>(ms.count()));
  return buf;
}

json class_json(ClassLabel c, const DatasetSchema& schema) {
  return {{"index", c.index()}, {"name", schema.class_name(c)}};
}

json example_json(const Counterexample& ex, const Record& query, const DatasetSchema& schema) {
  std::vector<bool> changed(schema.size(), false);
  for (const auto& ch : ex.changed_features) changed[ch.feature] = true;
  json features = json::array();
  json changes = json::array();
  for (auto j : schema.display_order()) {
    json f = {{"name", schema.feature(j).name}, {"value", ex.candidate.values[j]},
              {"changed", static_cast<bool>(changed[j])}};
    if (changed[j]) {
      f["old_value"] = query.values[j];
      changes.push_back({{"name", schema.feature(j).name},
                         {"old_value", query.values[j]},
                         {"new_value", ex.candidate.values[j]}});
    }
    features.push_back(std::move(f));
  }
  return {{"id", ex.candidate.id},
          {"predicted_class", class_json(ex.predicted_class, schema)},
          {"proximity", ex.proximity},
          {"sparsity", ex.sparsity},
          {"features", std::move(features)},
          {"changed_features", std::move(changes)}};
}

json list_json(const ExampleList& list, const Record& query, const DatasetSchema& schema) {
  json items = json::array();
  for (const auto& ex : list.items) items.push_back(example_json(ex, query, schema));
  return {{"requested", list.requested},
          {"returned", list.items.size()},
          {"budget_exhausted", list.budget_exhausted},
          {"items", std::move(items)}};
}

ExampleList to_list(CfResult r) {
  return ExampleList{std::move(r.items), r.requested, r.budget_exhausted};
}

template <typename T>
std::optional<T> optional_field(const json& doc, const char* key) {
  if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
  return doc.at(key).get<T>();
}

std::optional<int> count_field(const json& doc, const char* key) {
  if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
  const auto& v = doc.at(key);
  if (!v.is_number_integer()) {
    throw Error(ErrorCode::kInvalidCount, std::string(key) + " must be an integer in [0, 10]");
  }
  const auto n = v.get<std::int64_t>();
  if (n < 0 || n > kMaxExplanations) {
    throw Error(ErrorCode::kInvalidCount,
                std::string(key) + " must be in [0, 10], got " + std::to_string(n));
  }
  return static_cast<int>(n);
}

}  // namespace

ExplanationCounts default_counts(ClassLabel hypothesis) {
  return hypothesis.index() == 0 ? ExplanationCounts{3, 3} : ExplanationCounts{5, 5};
}

void validate_request(const HypothesisRequest& req) {
  if (req.record_id.has_value() == req.record.has_value()) {
    throw Error(ErrorCode::kValidation, "exactly one of record_id or record must be given");
  }
  check_count(req.n_counterexamples_per_class, "n_counterexamples_per_class");
  check_count(req.n_similar_cases, "n_similar_cases");
}

Engine::Engine(std::shared_ptr<const Classifier> m, LabeledDataset d)
    : schema(d.schema), model(std::move(m)), data(std::move(d)) {
  if (!model) throw Error(ErrorCode::kPrecondition, "engine needs a model");
  if (data.empty()) throw Error(ErrorCode::kEmptyDataset, "empty dataset");
  check_schema(*model, schema);
  stats = compute_stats(data);
  profile = make_distance_profile(schema, stats);
}

ExplanationBundle handle_request(const HypothesisRequest& req, const Engine& engine,
                                 SessionLog* log) {
  const auto started = std::chrono::steady_clock::now();
  validate_request(req);
  const auto& schema = engine.schema;

  ExplanationBundle b;
  if (req.record_id) {
    const auto idx = engine.data.find(*req.record_id);
    if (!idx) throw Error(ErrorCode::kNotFound, "record not found: " + *req.record_id);
    b.record = engine.data.records[*idx];
  } else {
    b.record = *req.record;
    if (b.record.id.empty()) b.record.id = "inline";
    b.inline_record = true;
    validate_record(schema, b.record);
  }
  b.record_id = b.record.id;
  b.hypothesis = req.hypothesis;
  b.model_fingerprint = engine.model->schema_fingerprint();
  b.seed = req.seed ? *req.seed : fresh_seed();

  const auto defaults = default_counts(req.hypothesis);
  const int n_cf = req.n_counterexamples_per_class.value_or(defaults.n_counterexamples_per_class);
  const int n_sc = req.n_similar_cases.value_or(defaults.n_similar_cases);

  CfConfig base;
  base.population_size = engine.population_size;
  base.generations = engine.generations;

  CfConfig sc = base;
  sc.target_class = req.hypothesis;
  sc.k = n_sc;
  sc.seed = derive_seed(b.seed, kSimilarSalt);
  b.similar_cases = to_list(
      generate_similar_cases(*engine.model, schema, b.record, sc, engine.profile, engine.data));

  for (int c = 0; c < static_cast<int>(kNumClasses); ++c) {
    if (c == req.hypothesis.index()) continue;
    CfConfig cf = base;
    cf.target_class = ClassLabel(c);
    cf.k = n_cf;
    cf.seed = derive_seed(b.seed, kCounterexampleSalt + static_cast<std::uint64_t>(c));
    b.counterexamples.emplace_back(
        ClassLabel(c), to_list(generate_counterexamples(*engine.model, schema, b.record, cf,
                                                        engine.profile, engine.data)));
  }

  if (req.include_importance) {
    auto cfg = engine.perturbation;
    cfg.seed = derive_seed(b.seed, kImportanceSalt);
    b.importance =
        explain_importance(*engine.model, schema, b.record, req.hypothesis, engine.stats, cfg);
  }

  if (log) {
    auto logged = req;
    logged.seed = b.seed;
    SessionEntry entry;
    entry.timestamp = utc_now();
    entry.request = request_to_json(logged, schema);
    entry.summary = bundle_summary(b, schema);
    entry.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();
    log->append(std::move(entry));
  }
  return b;
}

HypothesisRequest investigate_another_hypothesis(const ExplanationBundle& previous,
                                                 ClassLabel new_hypothesis) {
  HypothesisRequest req;
  if (previous.inline_record) {
    req.record = previous.record;
  } else {
    req.record_id = previous.record_id;
  }
  req.hypothesis = new_hypothesis;
  const auto counts = default_counts(new_hypothesis);
  req.n_counterexamples_per_class = counts.n_counterexamples_per_class;
  req.n_similar_cases = counts.n_similar_cases;
  req.include_importance = previous.importance.has_value();
  req.seed = previous.seed;
  req.repeat = new_hypothesis == previous.hypothesis;
  return req;
}

json record_to_json(const Record& record, const DatasetSchema& schema) {
  json features = json::array();
  for (auto j : schema.display_order()) {
    features.push_back({{"name", schema.feature(j).name}, {"value", record.values[j]}});
  }
  return {{"id", record.id}, {"features", std::move(features)}};
}

Record record_from_json(const json& doc, const DatasetSchema& schema) {
  if (!doc.is_object()) throw Error(ErrorCode::kValidation, "record must be a JSON object");
  Record r;
  r.id = doc.value("id", std::string("inline"));
  r.values.assign(schema.size(), 0.0);
  std::vector<bool> seen(schema.size(), false);
  auto put = [&](const std::string& name, const json& v) {
    const auto j = schema.find(name);
    if (!j) throw Error(ErrorCode::kValidation, "unknown feature: " + name);
    if (!v.is_number()) throw Error(ErrorCode::kValidation, "feature " + name + " must be a number");
    r.values[*j] = v.get<double>();
    seen[*j] = true;
  };
  if (doc.contains("values") && doc.at("values").is_object()) {
    for (const auto& [name, v] : doc.at("values").items()) put(name, v);
  } else if (doc.contains("features") && doc.at("features").is_array()) {
    for (const auto& f : doc.at("features")) {
      if (!f.is_object() || !f.contains("name") || !f.at("name").is_string() ||
          !f.contains("value")) {
        throw Error(ErrorCode::kValidation, "record features need name and value");
      }
      put(f.at("name").get<std::string>(), f.at("value"));
    }
  } else {
    throw Error(ErrorCode::kValidation, "record needs a values object or a features list");
  }
  for (std::size_t j = 0; j < schema.size(); ++j) {
    if (!seen[j]) throw Error(ErrorCode::kValidation, "missing feature: " + schema.feature(j).name);
  }
  validate_record(schema, r);
  return r;
}

json request_to_json(const HypothesisRequest& req, const DatasetSchema& schema) {
  json doc = {{"hypothesis", req.hypothesis.index()},
              {"include_importance", req.include_importance}};
  if (req.record_id) doc["record_id"] = *req.record_id;
  if (req.record) doc["record"] = record_to_json(*req.record, schema);
  if (req.n_counterexamples_per_class) {
    doc["n_counterexamples_per_class"] = *req.n_counterexamples_per_class;
  }
  if (req.n_similar_cases) doc["n_similar_cases"] = *req.n_similar_cases;
  if (req.seed) doc["seed"] = *req.seed;
  if (req.repeat) doc["repeat"] = true;
  return doc;
}

HypothesisRequest request_from_json(const json& doc, const DatasetSchema& schema) {
  if (!doc.is_object()) throw Error(ErrorCode::kValidation, "request must be a JSON object");
  HypothesisRequest req;
  if (!doc.contains("hypothesis")) throw Error(ErrorCode::kValidation, "missing field: hypothesis");
  const auto& h = doc.at("hypothesis");
  if (h.is_number_integer()) {
    const auto v = h.get<std::int64_t>();
    if (v < 0 || v >= static_cast<std::int64_t>(kNumClasses)) {
      throw Error(ErrorCode::kInvalidClass,
                  "hypothesis must be 0, 1 or 2, got " + std::to_string(v));
    }
    req.hypothesis = ClassLabel(static_cast<int>(v));
  } else if (h.is_string()) {
    req.hypothesis = parse_class_label(h.get<std::string>());
  } else {
    throw Error(ErrorCode::kInvalidClass, "hypothesis must be a class index or name");
  }
  try {
    req.record_id = optional_field<std::string>(doc, "record_id");
    if (doc.contains("record") && !doc.at("record").is_null()) {
      req.record = record_from_json(doc.at("record"), schema);
    }
    req.include_importance = doc.value("include_importance", false);
    req.seed = optional_field<std::uint64_t>(doc, "seed");
    req.repeat = doc.value("repeat", false);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kValidation, std::string("malformed request: ") + e.what());
  }
  req.n_counterexamples_per_class = count_field(doc, "n_counterexamples_per_class");
  req.n_similar_cases = count_field(doc, "n_similar_cases");
  validate_request(req);
  return req;
}

json bundle_to_json(const ExplanationBundle& b, const DatasetSchema& schema) {
  json cfs = json::object();
  for (const auto& [cls, list] : b.counterexamples) {
    json entry = list_json(list, b.record, schema);
    entry["class"] = class_json(cls, schema);
    cfs[std::to_string(cls.index())] = std::move(entry);
  }
  json doc = {{"record_id", b.record_id},
              {"inline_record", b.inline_record},
              {"hypothesis", class_json(b.hypothesis, schema)},
              {"record", record_to_json(b.record, schema)},
              {"similar_cases", list_json(b.similar_cases, b.record, schema)},
              {"counterexamples", std::move(cfs)},
              {"provenance",
               {{"model_fingerprint", b.model_fingerprint},
                {"schema_fingerprint", schema.fingerprint()},
                {"seed", b.seed}}}};
  if (b.importance) {
    const auto& imp = *b.importance;
    json weights = json::array();
    for (auto j : schema.display_order()) {
      weights.push_back({{"name", schema.feature(j).name}, {"weight", imp.weights[j]}});
    }
    doc["importance"] = {
        {"hypothesis", class_json(imp.hypothesis, schema)},
        {"weights", std::move(weights)},
        {"intercept", imp.intercept},
        {"surrogate_r2", imp.surrogate_r2},
        {"quality", imp.quality == SurrogateQuality::kOk ? "ok" : "degenerate"}};
  } else {
    doc["importance"] = nullptr;
  }
  return doc;
}

std::string bundle_text(const ExplanationBundle& bundle, const DatasetSchema& schema) {
  return bundle_to_json(bundle, schema).dump();
}

json bundle_summary(const ExplanationBundle& b, const DatasetSchema& schema) {
  json cfs = json::object();
  for (const auto& [cls, list] : b.counterexamples) {
    cfs[std::to_string(cls.index())] = {{"returned", list.items.size()},
                                        {"budget_exhausted", list.budget_exhausted}};
  }
  char digest[17];
  std::snprintf(digest, sizeof digest, "%016llx",
                static_cast<unsigned long long>(fnv1a64(bundle_text(b, schema))));
  return {{"record_id", b.record_id},
          {"hypothesis", b.hypothesis.index()},
          {"similar_cases",
           {{"returned", b.similar_cases.items.size()},
            {"budget_exhausted", b.similar_cases.budget_exhausted}}},
          {"counterexamples", std::move(cfs)},
          {"importance", b.importance.has_value()},
          {"seed", b.seed},
          {"digest", digest}};
}

namespace {

json entry_json(const SessionEntry& e) {
  return {{"timestamp", e.timestamp},
          {"request", e.request},
          {"summary", e.summary},
          {"elapsed_ms", e.elapsed_ms}};
}

SessionEntry entry_from_json(const json& doc) {
  SessionEntry e;
  e.timestamp = doc.at("timestamp").get<std::string>();
  e.request = doc.at("request");
  e.summary = doc.at("summary");
  e.elapsed_ms = doc.value("elapsed_ms", 0.0);
  return e;
}

}  // namespace

SessionLog::SessionLog(const std::filesystem::path& path) : path_(path) {
  if (std::filesystem::exists(path)) entries_ = read_session_log(path);
  out_.open(path, std::ios::app | std::ios::binary);
  if (!out_) throw Error(ErrorCode::kIo, "cannot open session log: " + path.string());
}

void SessionLog::append(SessionEntry entry) {
  std::lock_guard lock(mu_);
  if (path_) {
    out_ << entry_json(entry).dump() << '\n';
    out_.flush();
    if (!out_) throw Error(ErrorCode::kIo, "session log write failed: " + path_->string());
  }
  entries_.push_back(std::move(entry));
}

std::vector<SessionEntry> SessionLog::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::size_t SessionLog::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

json SessionLog::to_json() const {
  std::lock_guard lock(mu_);
  json list = json::array();
  for (const auto& e : entries_) list.push_back(entry_json(e));
  return {{"entries", std::move(list)}};
}

std::vector<SessionEntry> read_session_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read session log: " + path.string());
  std::vector<SessionEntry> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(entry_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse,
                  "session log line " + std::to_string(n) + ": " + std::string(e.what()));
    }
  }
  return out;
}

ReplayResult replay(const std::vector<SessionEntry>& entries, const Engine& engine) {
  ReplayResult out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto req = request_from_json(entries[i].request, engine.schema);
    const auto bundle = handle_request(req, engine);
    if (bundle_summary(bundle, engine.schema) != entries[i].summary) out.mismatches.push_back(i);
    ++out.replayed;
  }
  return out;
}

}  // namespace hxai
