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
#include <cmath>
#include <numeric>

#include "hxai/error.hpp"
#include "hxai/rng.hpp"
#include "hxai/tabular.hpp"

namespace hxai {
namespace {

double median_of(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// Fewest decimal places (up to 6) that represent v exactly; 7 if none do.
int decimals_of(double v) {
  double scale = 1.0;
  for (int d = 0; d <= 6; ++d, scale *= 10.0) {
    const double x = v * scale;
    if (std::abs(x - std::round(x)) <= 1e-9 * std::max(1.0, std::abs(x))) return d;
  }
  return 7;
}

}  // namespace

FeatureStats compute_stats(const LabeledDataset& data) {
  if (data.empty()) throw Error(ErrorCode::kEmptyDataset, "empty dataset");
  const std::size_t n = data.size();
  const std::size_t d = data.schema.size();

  FeatureStats stats;
  stats.features.resize(d);
  std::vector<double> column(n);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) column[i] = data.records[i].values[j];

    FeatureSummary s;
    const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
    s.min = *lo;
    s.max = *hi;
    s.mean = std::accumulate(column.begin(), column.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double v : column) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(n));
    if (s.max == s.min) s.stddev = 0.0;  // guard against rounding residue
    const auto kind = data.schema.feature(j).kind;
    if (kind == FeatureKind::kBoolean) s.freq_one = s.mean;
    if (kind == FeatureKind::kReal) {
      int places = 0;
      for (double v : column) places = std::max(places, decimals_of(v));
      s.resolution = places <= 6 ? std::pow(10.0, -places) : 0.0;
    } else if (kind == FeatureKind::kInteger) {
      s.resolution = 1.0;
    }

    std::vector<double> scratch = column;
    s.median = median_of(scratch);
    for (auto& v : scratch) v = std::abs(v - s.median);
    s.mad = median_of(scratch);
    stats.features[j] = s;
  }
  return stats;
}

Split stratified_split(const LabeledDataset& data, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorCode::kPrecondition, "test_fraction must lie in (0,1)");
  }
  std::array<std::vector<std::size_t>, kNumClasses> by_class;
  for (std::size_t i = 0; i < data.size(); ++i) {
    by_class[static_cast<std::size_t>(data.labels[i].index())].push_back(i);
  }
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (by_class[c].size() < 2) {
      throw Error(ErrorCode::kPrecondition,
                  "class " + data.schema.class_name(ClassLabel(static_cast<int>(c))) + " has " +
                      std::to_string(by_class[c].size()) + " records; a split needs at least 2");
    }
  }

  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> test_idx;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    auto& idx = by_class[c];
    Rng rng(derive_seed(seed, c));
    std::shuffle(idx.begin(), idx.end(), rng);
    const auto n_test = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(idx.size())));
    test_idx.insert(test_idx.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
    train_idx.insert(train_idx.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  return {data.subset(train_idx), data.subset(test_idx)};
}

std::vector<Fold> kfold_indices(const LabeledDataset& data, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::kPrecondition, "k must be at least 2");
  std::array<std::vector<std::size_t>, kNumClasses> by_class;
  for (std::size_t i = 0; i < data.size(); ++i) {
    by_class[static_cast<std::size_t>(data.labels[i].index())].push_back(i);
  }
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    // An absent class is fine; a present one must reach every fold.
    if (!by_class[c].empty() && by_class[c].size() < k) {
      throw Error(ErrorCode::kPrecondition,
                  "k=" + std::to_string(k) + " exceeds the " + std::to_string(by_class[c].size()) +
                      " records of class " +
                      data.schema.class_name(ClassLabel(static_cast<int>(c))));
    }
  }

  // Deal class-grouped, shuffled indices round-robin with one running counter
  // so fold sizes differ by at most one overall and per class.
  std::vector<std::vector<std::size_t>> validation(k);
  std::size_t counter = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    auto idx = by_class[c];
    Rng rng(derive_seed(seed, 100 + c));
    std::shuffle(idx.begin(), idx.end(), rng);
    for (auto i : idx) validation[counter++ % k].push_back(i);
  }

  std::vector<Fold> folds(k);
  std::vector<std::size_t> fold_of(data.size());
  for (std::size_t f = 0; f < k; ++f) {
    for (auto i : validation[f]) fold_of[i] = f;
  }
  for (std::size_t f = 0; f < k; ++f) {
    folds[f].validation = std::move(validation[f]);
    std::sort(folds[f].validation.begin(), folds[f].validation.end());
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t f = 0; f < k; ++f) {
      if (fold_of[i] != f) folds[f].train.push_back(i);
    }
  }
  return folds;
}

}  // namespace hxai
