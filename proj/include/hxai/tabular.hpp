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

// Thyroid feature system, dataset ingestion, summary statistics and
// stratified resampling.

#ifndef HXAI_TABULAR_HPP_
#define HXAI_TABULAR_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hxai {

inline constexpr std::size_t kNumClasses = 3;
inline constexpr std::size_t kNumFeatures = 20;

enum class FeatureKind { kBoolean, kInteger, kReal };

std::string_view to_string(FeatureKind kind);
// Throws Error(kSchema) for anything but boolean/integer/real (any case).
FeatureKind parse_feature_kind(std::string_view text);

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::kReal;
  std::string description;
  int display_priority = 0;  // lower is shown earlier
  bool mutable_ = true;      // may the counterfactual search alter it
};

// Class index in {0,1,2}: Negative, Hyperthyroid, Hypothyroid.
class ClassLabel {
 public:
  constexpr ClassLabel() = default;
  // Throws Error(kInvalidClass) when index >= 3.
  explicit ClassLabel(int index);

  constexpr int index() const noexcept { return index_; }
  constexpr auto operator<=>(const ClassLabel&) const = default;

 private:
  int index_ = 0;
};

// Accepts "0".."2" or a class name, case-insensitively.
ClassLabel parse_class_label(std::string_view text);

class DatasetSchema {
 public:
  DatasetSchema() = default;
  // Validates the Table-1 feature set; see load_schema for the error texts.
  DatasetSchema(std::vector<FeatureSpec> features,
                std::vector<std::string> classes);

  std::span<const FeatureSpec> features() const { return features_; }
  const FeatureSpec& feature(std::size_t i) const { return features_.at(i); }
  std::size_t size() const { return features_.size(); }
  std::span<const std::string> classes() const { return classes_; }
  const std::string& class_name(ClassLabel c) const {
    return classes_[static_cast<std::size_t>(c.index())];
  }

  // Column index of a feature; nullopt when absent.
  std::optional<std::size_t> find(std::string_view name) const;
  // Throws Error(kSchema) when absent.
  std::size_t index_of(std::string_view name) const;

  // Feature indices sorted by display_priority.
  const std::vector<std::size_t>& display_order() const { return display_order_; }

  // Hash of (feature names, kinds, class names) in column order. Display
  // priority and mutability do not participate: they do not change what a
  // model sees.
  const std::string& fingerprint() const { return fingerprint_; }

 private:
  std::vector<FeatureSpec> features_;
  std::vector<std::string> classes_;
  std::vector<std::size_t> display_order_;
  std::string fingerprint_;
};

// The Table-1 feature names in their published order.
std::span<const std::string_view> thyroid_feature_names();
std::span<const std::string_view> thyroid_class_names();

// Schema document grammar (one feature per line, '#' starts a comment):
//
//   classes: Negative, Hyperthyroid, Hypothyroid        (optional)
//   name | kind | description | display_priority | mutable
//
// The last three fields are optional. display_priority must be given for all
// features or for none; when none is given, age, sex and TSH come first and
// the rest follow in document order. mutable defaults to true.
DatasetSchema load_schema(std::string_view document);
DatasetSchema load_schema_file(const std::filesystem::path& path);
// The built-in Table-1 schema document, also shipped as data/thyroid_schema.txt.
std::string_view default_schema_document();
const DatasetSchema& default_schema();

struct Record {
  std::string id;
  std::vector<double> values;

  bool operator==(const Record&) const = default;
};

// Throws Error(kValidation) naming the feature on kind violations: booleans
// in {0,1}, integers non-negative and integral, reals non-negative and finite.
void validate_record(const DatasetSchema& schema, const Record& record);

struct LabeledDataset {
  DatasetSchema schema;
  std::vector<Record> records;
  std::vector<ClassLabel> labels;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  std::array<std::size_t, kNumClasses> class_counts() const;
  // Index of the record with this id; nullopt when absent.
  std::optional<std::size_t> find(std::string_view id) const;
  // Copy of the rows at `indices`, in that order.
  LabeledDataset subset(std::span<const std::size_t> indices) const;
};

enum class MissingPolicy { kDropRow };

struct IngestReport {
  std::size_t rows_read = 0;
  std::size_t rows_dropped = 0;
  std::array<std::size_t, kNumClasses> class_counts{};

  std::size_t rows_kept() const { return rows_read - rows_dropped; }
  // Fraction of kept rows per class; zeros for an empty dataset.
  std::array<double, kNumClasses> class_proportions() const;
};

struct IngestResult {
  LabeledDataset data;
  IngestReport report;
};

// Comma-delimited, header row, one record per row, target in the last
// column. Feature columns follow schema order; an optional leading "id"
// column carries record ids (otherwise ids are 1-based data-row numbers).
// Cells that are empty or "?" mark a missing value.
IngestResult ingest_csv(const std::filesystem::path& path,
                        const DatasetSchema& schema,
                        MissingPolicy policy = MissingPolicy::kDropRow);
IngestResult ingest_csv_text(std::string_view text, const DatasetSchema& schema,
                             MissingPolicy policy = MissingPolicy::kDropRow);

// Writes the ingest_csv format with an id column and integer targets.
std::string to_csv(const LabeledDataset& data);
void write_csv(const LabeledDataset& data, const std::filesystem::path& path);

// Converts a raw UCI thyroid0387-style file (30 comma-separated fields,
// t/f booleans, M/F sex, '?' for missing, diagnosis code last) to the
// ingest_csv format. Diagnosis letters A-D map to Hyperthyroid, E-H to
// Hypothyroid, '-' to Negative; every other diagnosis is skipped and
// counted. Missing values are passed through as "?".
struct UciConversion {
  std::string csv;
  std::size_t rows_read = 0;
  std::size_t rows_skipped_diagnosis = 0;
};
UciConversion convert_uci_thyroid0387(std::string_view raw,
                                      const DatasetSchema& schema);

struct FeatureSummary {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
  double median = 0.0;
  double mad = 0.0;     // median absolute deviation from the median
  double freq_one = 0.0;  // booleans only; 0 otherwise
  // Recording step: 10^-d for the fewest decimals d <= 6 that express every
  // value, 1 for integers, 0 for booleans or finer-grained columns.
  double resolution = 0.0;

  double range() const { return max - min; }
};

struct FeatureStats {
  std::vector<FeatureSummary> features;  // schema order

  const FeatureSummary& operator[](std::size_t i) const { return features[i]; }
  std::size_t size() const { return features.size(); }
};

// Throws Error(kEmptyDataset) on an empty dataset.
FeatureStats compute_stats(const LabeledDataset& data);

struct Split {
  LabeledDataset train;
  LabeledDataset test;
};

// Per class, round(test_fraction * class_count) records go to test.
// Requires every class to hold at least two records.
Split stratified_split(const LabeledDataset& data, double test_fraction,
                       std::uint64_t seed);

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

// Stratified k-fold partition. Requires k >= 2 and every class present to
// hold at least k records.
std::vector<Fold> kfold_indices(const LabeledDataset& data, std::size_t k,
                                std::uint64_t seed);

}  // namespace hxai

#endif  // HXAI_TABULAR_HPP_
