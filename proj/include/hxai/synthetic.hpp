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


// Deterministic synthetic records with a thyroid-like profile. They are NOT
// the UCI thyroid data: marginals are hand-set approximations used for
// smoke tests, demos and benchmarks when the real file is not available.

#ifndef HXAI_SYNTHETIC_HPP_
#define HXAI_SYNTHETIC_HPP_

#include <array>
#include <cstdint>
#include <string>

#include "hxai/tabular.hpp"

namespace hxai {

struct StandinConfig {
  std::uint64_t seed = 2026;
  std::array<std::size_t, kNumClasses> class_counts{6385, 582, 175};
  // Extra rows carrying a "?" cell; only emitted by make_thyroid_standin_csv.
  std::size_t missing_rows = 0;
};

LabeledDataset make_thyroid_standin(const DatasetSchema& schema, const StandinConfig& config);

// Same records in the ingest CSV format, with `missing_rows` incomplete rows
// interleaved. Ingesting it with drop_row gives back make_thyroid_standin.
std::string make_thyroid_standin_csv(const DatasetSchema& schema, const StandinConfig& config);

}  // namespace hxai

#endif  // HXAI_SYNTHETIC_HPP_
