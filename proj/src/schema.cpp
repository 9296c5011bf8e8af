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

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "hxai/error.hpp"
#include "hxai/rng.hpp"
#include "hxai/tabular.hpp"
#include "text_util.hpp"

namespace hxai {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSchema: return "schema_error";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kValidation: return "validation_error";
    case ErrorCode::kInvalidClass: return "invalid_class";
    case ErrorCode::kInvalidCount: return "invalid_count";
    case ErrorCode::kNotFound: return "record_not_found";
    case ErrorCode::kSchemaMismatch: return "schema_mismatch";
    case ErrorCode::kEmptyDataset: return "empty_dataset";
    case ErrorCode::kPrecondition: return "precondition_failed";
    case ErrorCode::kModelFormat: return "model_format";
  }
  return "unknown";
}

namespace {

constexpr std::array<std::string_view, kNumFeatures> kTable1Names = {
    "age",          "sex",          "on_thyroxine",      "on_antithyroid_meds",
    "sick",         "pregnant",     "thyroid_surgery",   "I131_treatment",
    "query_hypothyroid", "query_hyperthyroid", "lithium", "goitre",
    "tumor",        "hypopituitary", "psych",            "TSH",
    "T3",           "TT4",          "T4U",               "FTI"};

constexpr std::array<std::string_view, kNumClasses> kClassNames = {
    "Negative", "Hyperthyroid", "Hypothyroid"};

constexpr std::array<std::string_view, 3> kPriorityFirst = {"age", "sex", "TSH"};

constexpr std::string_view kDefaultSchemaDocument = R"(# Thyroid feature system.
# name | kind | description | display_priority | mutable
classes: Negative, Hyperthyroid, Hypothyroid
age | integer | Age of the patient
sex | boolean | Sex of the patient (1 = male, 0 = female)
on_thyroxine | boolean | Whether patient is on thyroxine
on_antithyroid_meds | boolean | Whether patient is on antithyroid meds
sick | boolean | Whether patient is sick
pregnant | boolean | Whether patient is pregnant
thyroid_surgery | boolean | Whether patient has undergone thyroid surgery
I131_treatment | boolean | Whether patient is undergoing I131 treatment
query_hypothyroid | boolean | Patient believes they have hypothyroid
query_hyperthyroid | boolean | Patient believes they have hyperthyroid
lithium | boolean | Whether patient takes lithium
goitre | boolean | Whether patient has goitre
tumor | boolean | Whether patient has a tumor
hypopituitary | real | Hyperpituitary gland status
psych | boolean | Whether patient has psych
TSH | real | TSH level in blood from lab work
T3 | real | T3 level in blood from lab work
TT4 | real | TT4 level in blood from lab work
T4U | real | T4U level in blood from lab work
FTI | real | FTI level in blood from lab work
)";

std::string compute_fingerprint(const std::vector<FeatureSpec>& features,
                                const std::vector<std::string>& classes) {
  std::uint64_t h = fnv1a64("hxai-schema-v1");
  for (const auto& f : features) {
    h = fnv1a64(f.name, h);
    h = fnv1a64(":", h);
    h = fnv1a64(to_string(f.kind), h);
    h = fnv1a64(";", h);
  }
  for (const auto& c : classes) {
    h = fnv1a64(c, h);
    h = fnv1a64(",", h);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool parse_bool_field(std::string_view text, std::size_t line_no) {
  const std::string lowered = text::to_lower(text);
  if (lowered == "true" || lowered == "yes" || lowered == "1") return true;
  if (lowered == "false" || lowered == "no" || lowered == "0") return false;
  throw Error(ErrorCode::kSchema, "line " + std::to_string(line_no) +
                                      ": invalid mutable flag: " + std::string(text));
}

}  // namespace

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kBoolean: return "boolean";
    case FeatureKind::kInteger: return "integer";
    case FeatureKind::kReal: return "real";
  }
  return "real";
}

FeatureKind parse_feature_kind(std::string_view text) {
  const std::string lowered = text::to_lower(text::trim(text));
  if (lowered == "boolean") return FeatureKind::kBoolean;
  if (lowered == "integer") return FeatureKind::kInteger;
  if (lowered == "real") return FeatureKind::kReal;
  throw Error(ErrorCode::kSchema, "unknown kind: " + std::string(text::trim(text)));
}

ClassLabel::ClassLabel(int index) : index_(index) {
  if (index < 0 || index >= static_cast<int>(kNumClasses)) {
    throw Error(ErrorCode::kInvalidClass,
                "invalid class index: " + std::to_string(index));
  }
}

ClassLabel parse_class_label(std::string_view raw) {
  const std::string_view trimmed = text::trim(raw);
  if (trimmed.size() == 1 && trimmed[0] >= '0' && trimmed[0] <= '9') {
    return ClassLabel(trimmed[0] - '0');
  }
  const std::string lowered = text::to_lower(trimmed);
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (lowered == text::to_lower(kClassNames[c])) return ClassLabel(static_cast<int>(c));
  }
  throw Error(ErrorCode::kInvalidClass, "unknown class label: " + std::string(trimmed));
}

std::span<const std::string_view> thyroid_feature_names() { return kTable1Names; }
std::span<const std::string_view> thyroid_class_names() { return kClassNames; }

DatasetSchema::DatasetSchema(std::vector<FeatureSpec> features,
                             std::vector<std::string> classes)
    : features_(std::move(features)), classes_(std::move(classes)) {
  std::set<std::string, std::less<>> seen;
  for (const auto& f : features_) {
    if (!seen.insert(f.name).second) {
      throw Error(ErrorCode::kSchema, "duplicate feature: " + f.name);
    }
    if (std::find(kTable1Names.begin(), kTable1Names.end(), f.name) == kTable1Names.end()) {
      throw Error(ErrorCode::kSchema, "unknown feature: " + f.name);
    }
  }
  for (auto name : kTable1Names) {
    if (!seen.contains(name)) {
      throw Error(ErrorCode::kSchema, "missing feature: " + std::string(name));
    }
  }
  if (classes_.size() != kNumClasses ||
      !std::equal(classes_.begin(), classes_.end(), kClassNames.begin(),
                  [](const std::string& a, std::string_view b) {
                    return text::to_lower(a) == text::to_lower(b);
                  })) {
    throw Error(ErrorCode::kSchema,
                "classes must be exactly: Negative, Hyperthyroid, Hypothyroid");
  }
  for (std::size_t c = 0; c < kNumClasses; ++c) classes_[c] = std::string(kClassNames[c]);

  std::set<int> priorities;
  for (const auto& f : features_) {
    if (!priorities.insert(f.display_priority).second) {
      throw Error(ErrorCode::kSchema,
                  "duplicate display_priority " + std::to_string(f.display_priority) +
                      " at feature: " + f.name);
    }
  }
  display_order_.resize(features_.size());
  std::iota(display_order_.begin(), display_order_.end(), std::size_t{0});
  std::sort(display_order_.begin(), display_order_.end(), [&](std::size_t a, std::size_t b) {
    return features_[a].display_priority < features_[b].display_priority;
  });
  fingerprint_ = compute_fingerprint(features_, classes_);
}

std::optional<std::size_t> DatasetSchema::find(std::string_view name) const {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t DatasetSchema::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw Error(ErrorCode::kSchema, "missing feature: " + std::string(name));
}

DatasetSchema load_schema(std::string_view document) {
  std::vector<FeatureSpec> features;
  std::vector<std::string> classes(kClassNames.begin(), kClassNames.end());
  std::vector<bool> has_priority;

  std::size_t line_no = 0;
  for (std::string_view line : text::split_lines(document)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;

    if (line.starts_with("classes:")) {
      classes.clear();
      for (auto c : text::split(line.substr(8), ',')) classes.emplace_back(text::trim(c));
      continue;
    }

    const auto fields = text::split(line, '|');
    if (fields.size() < 2 || fields.size() > 5) {
      throw Error(ErrorCode::kSchema, "line " + std::to_string(line_no) +
                                          ": expected 2-5 '|'-separated fields");
    }
    FeatureSpec spec;
    spec.name = std::string(text::trim(fields[0]));
    if (spec.name.empty()) {
      throw Error(ErrorCode::kSchema, "line " + std::to_string(line_no) + ": empty feature name");
    }
    spec.kind = parse_feature_kind(fields[1]);
    if (fields.size() > 2) spec.description = std::string(text::trim(fields[2]));
    bool priority_given = false;
    if (fields.size() > 3 && !text::trim(fields[3]).empty()) {
      auto value = text::parse_int(text::trim(fields[3]));
      if (!value) {
        throw Error(ErrorCode::kSchema, "line " + std::to_string(line_no) +
                                            ": invalid display_priority");
      }
      spec.display_priority = static_cast<int>(*value);
      priority_given = true;
    }
    if (fields.size() > 4 && !text::trim(fields[4]).empty()) {
      spec.mutable_ = parse_bool_field(text::trim(fields[4]), line_no);
    }
    has_priority.push_back(priority_given);
    features.push_back(std::move(spec));
  }

  const auto given = std::count(has_priority.begin(), has_priority.end(), true);
  if (given != 0 && static_cast<std::size_t>(given) != features.size()) {
    throw Error(ErrorCode::kSchema,
                "display_priority must be given for every feature or for none");
  }
  if (given == 0) {
    // age, sex, TSH first; the rest keep document order.
    int next = static_cast<int>(kPriorityFirst.size());
    for (auto& f : features) {
      auto it = std::find(kPriorityFirst.begin(), kPriorityFirst.end(), f.name);
      f.display_priority = it != kPriorityFirst.end()
                               ? static_cast<int>(it - kPriorityFirst.begin())
                               : next++;
    }
  }
  return DatasetSchema(std::move(features), std::move(classes));
}

DatasetSchema load_schema_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read schema: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_schema(buffer.str());
}

std::string_view default_schema_document() { return kDefaultSchemaDocument; }

const DatasetSchema& default_schema() {
  static const DatasetSchema schema = load_schema(kDefaultSchemaDocument);
  return schema;
}

void validate_record(const DatasetSchema& schema, const Record& record) {
  if (record.values.size() != schema.size()) {
    throw Error(ErrorCode::kValidation,
                "record " + record.id + " has " + std::to_string(record.values.size()) +
                    " values, expected " + std::to_string(schema.size()));
  }
  for (std::size_t i = 0; i < schema.size(); ++i) {
    const auto& spec = schema.feature(i);
    const double v = record.values[i];
    const auto fail = [&](std::string_view why) {
      throw Error(ErrorCode::kValidation, "record " + record.id + ": feature " + spec.name +
                                              " " + std::string(why) + " (got " +
                                              text::format_number(v) + ")");
    };
    if (!std::isfinite(v)) fail("must be finite");
    switch (spec.kind) {
      case FeatureKind::kBoolean:
        if (v != 0.0 && v != 1.0) fail("must be 0 or 1");
        break;
      case FeatureKind::kInteger:
        if (v < 0.0 || std::floor(v) != v) fail("must be a non-negative integer");
        break;
      case FeatureKind::kReal:
        if (v < 0.0) fail("must be non-negative");
        break;
    }
  }
}

std::array<std::size_t, kNumClasses> LabeledDataset::class_counts() const {
  std::array<std::size_t, kNumClasses> counts{};
  for (auto label : labels) ++counts[static_cast<std::size_t>(label.index())];
  return counts;
}

std::optional<std::size_t> LabeledDataset::find(std::string_view id) const {
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].id == id) return i;
  }
  return std::nullopt;
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
  LabeledDataset out;
  out.schema = schema;
  out.records.reserve(indices.size());
  out.labels.reserve(indices.size());
  for (auto i : indices) {
    out.records.push_back(records.at(i));
    out.labels.push_back(labels.at(i));
  }
  return out;
}

}  // namespace hxai
