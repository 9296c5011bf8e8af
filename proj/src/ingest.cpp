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

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "hxai/error.hpp"
#include "hxai/tabular.hpp"
#include "text_util.hpp"

namespace hxai {
namespace {

bool is_missing(std::string_view cell) {
  cell = text::trim(cell);
  return cell.empty() || cell == "?";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

[[noreturn]] void row_error(std::size_t row, std::string_view message) {
  throw Error(ErrorCode::kParse, "row " + std::to_string(row) + ": " + std::string(message));
}

}  // namespace

std::array<double, kNumClasses> IngestReport::class_proportions() const {
  std::array<double, kNumClasses> out{};
  const auto kept = rows_kept();
  if (kept == 0) return out;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    out[c] = static_cast<double>(class_counts[c]) / static_cast<double>(kept);
  }
  return out;
}

IngestResult ingest_csv_text(std::string_view content, const DatasetSchema& schema,
                             MissingPolicy /*policy*/) {
  const auto lines = text::split_lines(content);
  if (lines.empty()) {
    // A zero-byte file has no data rows; treat it like a bare header.
    IngestResult empty;
    empty.data.schema = schema;
    return empty;
  }

  const auto header = text::split(lines[0], ',');
  const bool has_id = !header.empty() && text::to_lower(text::trim(header[0])) == "id";
  const std::size_t offset = has_id ? 1 : 0;
  const std::size_t expected_cols = offset + schema.size() + 1;
  if (header.size() != expected_cols) {
    throw Error(ErrorCode::kParse, "header mismatch: expected " +
                                       std::to_string(expected_cols) + " columns, got " +
                                       std::to_string(header.size()));
  }
  for (std::size_t i = 0; i < schema.size(); ++i) {
    const auto got = text::trim(header[offset + i]);
    if (got != schema.feature(i).name) {
      throw Error(ErrorCode::kParse, "header mismatch: column " + std::to_string(offset + i + 1) +
                                         " is '" + std::string(got) + "', expected '" +
                                         schema.feature(i).name + "'");
    }
  }

  IngestResult result;
  result.data.schema = schema;
  std::unordered_set<std::string> ids;

  for (std::size_t line = 1; line < lines.size(); ++line) {
    if (text::trim(lines[line]).empty()) continue;
    const std::size_t row = line;  // 1-based data-row number
    ++result.report.rows_read;
    const auto cells = text::split(lines[line], ',');
    if (cells.size() != expected_cols) {
      row_error(row, "expected " + std::to_string(expected_cols) + " cells, got " +
                         std::to_string(cells.size()));
    }
    bool missing = false;
    for (const auto& cell : cells) missing = missing || is_missing(cell);
    if (missing) {
      ++result.report.rows_dropped;
      continue;
    }

    Record record;
    record.id = has_id ? std::string(text::trim(cells[0])) : std::to_string(row);
    record.values.reserve(schema.size());
    for (std::size_t i = 0; i < schema.size(); ++i) {
      const auto cell = text::trim(cells[offset + i]);
      auto value = text::parse_double(cell);
      if (!value) {
        row_error(row, "column " + std::to_string(offset + i + 1) + " (" +
                           schema.feature(i).name + "): unparseable value '" +
                           std::string(cell) + "'");
      }
      record.values.push_back(*value);
    }
    try {
      validate_record(schema, record);
    } catch (const Error& e) {
      row_error(row, e.what());
    }

    ClassLabel label;
    try {
      label = parse_class_label(cells.back());
    } catch (const Error&) {
      row_error(row, "unknown target label '" + std::string(text::trim(cells.back())) + "'");
    }
    if (!ids.insert(record.id).second) row_error(row, "duplicate record id '" + record.id + "'");

    ++result.report.class_counts[static_cast<std::size_t>(label.index())];
    result.data.records.push_back(std::move(record));
    result.data.labels.push_back(label);
  }
  return result;
}

IngestResult ingest_csv(const std::filesystem::path& path, const DatasetSchema& schema,
                        MissingPolicy policy) {
  return ingest_csv_text(read_file(path), schema, policy);
}

std::string to_csv(const LabeledDataset& data) {
  std::string out = "id";
  for (const auto& f : data.schema.features()) {
    out += ',';
    out += f.name;
  }
  out += ",target\n";
  for (std::size_t r = 0; r < data.size(); ++r) {
    out += data.records[r].id;
    for (double v : data.records[r].values) {
      out += ',';
      out += text::format_number(v);
    }
    out += ',';
    out += std::to_string(data.labels[r].index());
    out += '\n';
  }
  return out;
}

void write_csv(const LabeledDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write file: " + path.string());
  out << to_csv(data);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

namespace {

// Column positions in the 30-field thyroid0387 layout.
constexpr std::array<std::pair<std::string_view, std::size_t>, kNumFeatures> kUciColumns = {{
    {"age", 0},          {"sex", 1},           {"on_thyroxine", 2},
    {"on_antithyroid_meds", 4}, {"sick", 5},   {"pregnant", 6},
    {"thyroid_surgery", 7}, {"I131_treatment", 8}, {"query_hypothyroid", 9},
    {"query_hyperthyroid", 10}, {"lithium", 11}, {"goitre", 12},
    {"tumor", 13},       {"hypopituitary", 14}, {"psych", 15},
    {"TSH", 17},         {"T3", 19},           {"TT4", 21},
    {"T4U", 23},         {"FTI", 25},
}};
constexpr std::size_t kUciFields = 30;

std::string uci_cell(std::string_view raw, FeatureKind kind, std::string_view name) {
  raw = text::trim(raw);
  if (is_missing(raw)) return "?";
  if (name == "sex") {
    if (raw == "M") return "1";
    if (raw == "F") return "0";
    return "?";
  }
  if (raw == "t") return "1";
  if (raw == "f") return "0";
  (void)kind;
  return std::string(raw);
}

}  // namespace

UciConversion convert_uci_thyroid0387(std::string_view raw, const DatasetSchema& schema) {
  UciConversion out;
  out.csv = "id";
  for (const auto& f : schema.features()) {
    out.csv += ',';
    out.csv += f.name;
  }
  out.csv += ",target\n";

  std::size_t line_no = 0;
  for (auto line : text::split_lines(raw)) {
    ++line_no;
    line = text::trim(line);
    if (line.empty()) continue;
    const auto fields = text::split(line, ',');
    if (fields.size() != kUciFields) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": expected " +
                                         std::to_string(kUciFields) + " fields, got " +
                                         std::to_string(fields.size()));
    }
    ++out.rows_read;

    // Diagnosis looks like "S[840801013]"; the bracketed number is the id.
    auto diagnosis = text::trim(fields[kUciFields - 1]);
    std::string id = std::to_string(line_no);
    if (auto open = diagnosis.find('['); open != std::string_view::npos) {
      auto close = diagnosis.find(']', open);
      if (close != std::string_view::npos) id = std::string(diagnosis.substr(open + 1, close - open - 1));
      diagnosis = diagnosis.substr(0, open);
    }
    int target = -1;
    if (!diagnosis.empty()) {
      const char code = diagnosis.front();
      if (code == '-') target = 0;
      else if (code >= 'A' && code <= 'D') target = 1;
      else if (code >= 'E' && code <= 'H') target = 2;
    }
    if (target < 0) {
      ++out.rows_skipped_diagnosis;
      continue;
    }

    out.csv += id;
    for (const auto& f : schema.features()) {
      auto it = std::find_if(kUciColumns.begin(), kUciColumns.end(),
                             [&](const auto& p) { return p.first == f.name; });
      out.csv += ',';
      out.csv += uci_cell(fields[it->second], f.kind, f.name);
    }
    out.csv += ',';
    out.csv += std::to_string(target);
    out.csv += '\n';
  }
  return out;
}

}  // namespace hxai
