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


#include "hxai/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "text_util.hpp"

namespace hxai {
namespace {

// Display width in code points; the arrow is multi-byte.
std::size_t width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

std::string pad(const std::string& s, std::size_t w) {
  const std::size_t have = width(s);
  return have >= w ? s : s + std::string(w - have, ' ');
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Rows are features, columns are the query and each example.
void example_table(std::ostringstream& os, const ExampleList& list, const Record& query,
                   const DatasetSchema& schema, const std::string& prefix) {
  if (list.requested == 0) {
    os << "  none requested\n";
    return;
  }
  if (list.items.empty()) {
    os << "  none found\n";
  } else {
    std::vector<std::vector<std::string>> cols;
    std::vector<std::string> head{"feature", "query"};
    std::vector<std::string> names, base;
    for (auto j : schema.display_order()) {
      names.push_back(schema.feature(j).name);
      base.push_back(text::format_number(query.values[j]));
    }
    cols.push_back(names);
    cols.push_back(base);
    for (std::size_t i = 0; i < list.items.size(); ++i) {
      const auto& ex = list.items[i];
      head.push_back(prefix + std::to_string(i + 1));
      std::vector<bool> changed(schema.size(), false);
      for (const auto& ch : ex.changed_features) changed[ch.feature] = true;
      std::vector<std::string> col;
      for (auto j : schema.display_order()) {
        const std::string now = text::format_number(ex.candidate.values[j]);
        col.push_back(changed[j] ? "→ " + now + " *" : now);
      }
      cols.push_back(std::move(col));
    }
    std::vector<std::size_t> w(cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
      w[c] = width(head[c]);
      for (const auto& cell : cols[c]) w[c] = std::max(w[c], width(cell));
    }
    os << " ";
    for (std::size_t c = 0; c < cols.size(); ++c) os << " " << pad(head[c], w[c]);
    os << "\n";
    for (std::size_t r = 0; r < cols[0].size(); ++r) {
      os << " ";
      for (std::size_t c = 0; c < cols.size(); ++c) os << " " << pad(cols[c][r], w[c]);
      os << "\n";
    }
    os << "\n";
    for (std::size_t i = 0; i < list.items.size(); ++i) {
      const auto& ex = list.items[i];
      os << "  " << prefix << i + 1 << " (sparsity " << ex.sparsity << ", proximity "
         << fixed(ex.proximity, 4) << "):";
      for (auto j : schema.display_order()) {
        for (const auto& ch : ex.changed_features) {
          if (ch.feature != j) continue;
          os << "  " << ch.name << ": " << text::format_number(ch.old_value) << " → "
             << text::format_number(ch.new_value) << " *";
        }
      }
      os << "\n";
    }
  }
  if (list.budget_exhausted) {
    os << "  note: fewer found than requested (" << list.items.size() << " of " << list.requested
       << ")\n";
  }
}

}  // namespace

std::string render_importance(const ImportanceVector& imp, const DatasetSchema& schema,
                              int half_width) {
  std::ostringstream os;
  double top = 0.0;
  std::size_t name_w = 0;
  for (std::size_t j = 0; j < imp.weights.size(); ++j) {
    top = std::max(top, std::abs(imp.weights[j]));
    name_w = std::max(name_w, schema.feature(j).name.size());
  }
  for (auto j : schema.display_order()) {
    const double w = imp.weights[j];
    const int len = top > 0.0 ? static_cast<int>(std::lround(std::abs(w) / top * half_width)) : 0;
    std::string left(static_cast<std::size_t>(half_width), ' ');
    std::string right;
    if (w < 0) {
      for (int i = 0; i < len; ++i) left[static_cast<std::size_t>(half_width - 1 - i)] = '-';
    } else {
      right.assign(static_cast<std::size_t>(len), '+');
    }
    char num[32];
    std::snprintf(num, sizeof num, "%+.4f", w);
    os << "  " << pad(schema.feature(j).name, name_w) << " " << num << " " << left << "|" << right
       << "\n";
  }
  os << "  surrogate R^2 " << fixed(imp.surrogate_r2, 3)
     << (imp.quality == SurrogateQuality::kDegenerate ? " (degenerate: model flat here)" : "")
     << "\n";
  return os.str();
}

std::string render_bundle(const ExplanationBundle& b, const DatasetSchema& schema) {
  std::ostringstream os;
  os << "Record " << b.record_id << (b.inline_record ? " (inline)" : "")
     << "  hypothesis: " << schema.class_name(b.hypothesis) << "\n";
  std::size_t name_w = 0;
  for (const auto& f : schema.features()) name_w = std::max(name_w, f.name.size());
  for (auto j : schema.display_order()) {
    os << "  " << pad(schema.feature(j).name, name_w) << "  "
       << text::format_number(b.record.values[j]) << "\n";
  }
  os << "\nSimilar cases (" << schema.class_name(b.hypothesis) << ")\n";
  example_table(os, b.similar_cases, b.record, schema, "S");
  for (const auto& [cls, list] : b.counterexamples) {
    os << "\nCounterexamples -> " << schema.class_name(cls) << "\n";
    example_table(os, list, b.record, schema, "C");
  }
  if (b.importance) {
    os << "\nFeature importance toward " << schema.class_name(b.hypothesis)
       << " (+ supports, - opposes)\n";
    os << render_importance(*b.importance, schema);
  }
  os << "\nseed " << b.seed << "  model " << b.model_fingerprint << "\n";
  return os.str();
}

std::string render_report(const EvalReport& r, const DatasetSchema& schema) {
  std::ostringstream os;
  os << "accuracy " << fixed(r.accuracy, 4) << "\n";
  std::size_t w = 5;
  for (const auto& c : schema.classes()) w = std::max(w, c.size());
  os << "  " << pad("class", w) << "  precision  recall  f1\n";
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    os << "  " << pad(schema.classes()[c], w) << "  " << pad(fixed(r.precision[c], 4), 9) << "  "
       << pad(fixed(r.recall[c], 4), 6) << "  " << fixed(r.f1[c], 4) << "\n";
  }
  os << "confusion (rows true, columns predicted)\n";
  for (std::size_t t = 0; t < kNumClasses; ++t) {
    os << "  " << pad(schema.classes()[t], w);
    for (std::size_t p = 0; p < kNumClasses; ++p) {
      char buf[16];
      std::snprintf(buf, sizeof buf, " %6zu", r.confusion[t][p]);
      os << buf;
    }
    os << "\n";
  }
  return os.str();
}

std::string render_cv(const CvReport& r, const DatasetSchema& schema) {
  std::ostringstream os;
  os << "fold  accuracy";
  for (const auto& c : schema.classes()) os << "  f1:" << c;
  os << "\n";
  for (std::size_t i = 0; i < r.folds.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%4zu  %8s", i + 1, fixed(r.folds[i].accuracy, 4).c_str());
    os << buf;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      os << "  " << pad(fixed(r.folds[i].f1[c], 4), schema.classes()[c].size() + 3);
    }
    os << "\n";
  }
  os << "mean  " << pad(fixed(r.mean_accuracy, 4), 8);
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    os << "  " << pad(fixed(r.mean_f1[c], 4), schema.classes()[c].size() + 3);
  }
  os << "\n";
  return os.str();
}

}  // namespace hxai
