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


// Shared fixtures for the unit tests.

#ifndef HXAI_TESTS_TEST_SUPPORT_HPP_
#define HXAI_TESTS_TEST_SUPPORT_HPP_

#include <initializer_list>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "hxai/gbdt.hpp"
#include "hxai/synthetic.hpp"
#include "hxai/tabular.hpp"

namespace hxai::testing {

// A euthyroid-looking record with the given overrides.
inline Record make_record(std::string id,
                          std::initializer_list<std::pair<std::string_view, double>> values = {}) {
  const auto& s = default_schema();
  Record r{std::move(id), std::vector<double>(s.size(), 0.0)};
  r.values[s.index_of("age")] = 45;
  r.values[s.index_of("TSH")] = 1.4;
  r.values[s.index_of("T3")] = 2.0;
  r.values[s.index_of("TT4")] = 105;
  r.values[s.index_of("T4U")] = 0.98;
  r.values[s.index_of("FTI")] = 107;
  for (const auto& [name, v] : values) r.values[s.index_of(name)] = v;
  return r;
}

inline double& at(Record& r, std::string_view name) {
  return r.values[default_schema().index_of(name)];
}
inline double at(const Record& r, std::string_view name) {
  return r.values[default_schema().index_of(name)];
}

// Full-size stand-in (7142 records), generated once.
inline const LabeledDataset& standin() {
  static const LabeledDataset data = make_thyroid_standin(default_schema(), StandinConfig{});
  return data;
}

inline LabeledDataset small_standin(std::uint64_t seed = 5, std::size_t scale = 10) {
  StandinConfig cfg;
  cfg.seed = seed;
  cfg.class_counts = {6385 / scale, 582 / scale, std::max<std::size_t>(175 / scale, 10)};
  return make_thyroid_standin(default_schema(), cfg);
}

// Default-config model on the full stand-in, trained once.
inline std::shared_ptr<const GbdtModel> standin_model() {
  static const auto model = std::make_shared<const GbdtModel>(train(standin(), TrainConfig{}));
  return model;
}

// Three classes separated by TSH alone.
inline LabeledDataset separable(std::size_t per_class = 30) {
  LabeledDataset d;
  d.schema = default_schema();
  for (std::size_t i = 0; i < per_class; ++i) {
    for (int c = 0; c < 3; ++c) {
      const double tsh = c == 0 ? 1.0 + 0.01 * i : c == 1 ? 0.01 + 0.001 * i : 20.0 + 0.1 * i;
      d.records.push_back(make_record("r" + std::to_string(d.records.size()),
                                      {{"TSH", tsh}, {"age", 20.0 + i}}));
      d.labels.emplace_back(c);
    }
  }
  return d;
}

}  // namespace hxai::testing

#endif  // HXAI_TESTS_TEST_SUPPORT_HPP_
