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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "hxai/error.hpp"
#include "hxai/tabular.hpp"
#include "test_support.hpp"

namespace hxai {
namespace {

using testing::make_record;

LabeledDataset fixture(std::initializer_list<double> tsh) {
  LabeledDataset d;
  d.schema = default_schema();
  for (double v : tsh) {
    d.records.push_back(make_record("r" + std::to_string(d.size()), {{"TSH", v}}));
    d.labels.emplace_back(0);
  }
  return d;
}

LabeledDataset with_counts(std::size_t a, std::size_t b, std::size_t c) {
  LabeledDataset d;
  d.schema = default_schema();
  const std::size_t counts[3] = {a, b, c};
  for (int k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < counts[k]; ++i) {
      d.records.push_back(make_record("r" + std::to_string(d.size())));
      d.labels.emplace_back(k);
    }
  }
  return d;
}

TEST(Stats, FixtureValues) {
  const auto d = fixture({0.1, 1.3, 8.0});
  const auto s = compute_stats(d);
  const auto tsh = s[default_schema().index_of("TSH")];
  EXPECT_EQ(tsh.min, 0.1);
  EXPECT_EQ(tsh.max, 8.0);
  // Hand arithmetic: mean 9.4/3, population std over the three values.
  const double mean = 9.4 / 3.0;
  EXPECT_NEAR(tsh.mean, mean, 1e-12);
  const double var = ((0.1 - mean) * (0.1 - mean) + (1.3 - mean) * (1.3 - mean) +
                      (8.0 - mean) * (8.0 - mean)) / 3.0;
  EXPECT_NEAR(tsh.stddev, std::sqrt(var), 1e-12);
  EXPECT_EQ(tsh.median, 1.3);
  EXPECT_NEAR(tsh.mad, 1.2, 1e-12);  // |deviations| = {1.2, 0, 6.7}
  EXPECT_DOUBLE_EQ(tsh.resolution, 0.1);
}

TEST(Stats, DegenerateColumns) {
  auto d = fixture({1.0, 2.0, 3.0});
  for (auto& r : d.records) testing::at(r, "goitre") = 1;
  const auto s = compute_stats(d);
  const auto age = s[default_schema().index_of("age")];
  EXPECT_EQ(age.stddev, 0.0);
  EXPECT_EQ(age.min, age.max);
  EXPECT_EQ(age.resolution, 1.0);
  const auto goitre = s[default_schema().index_of("goitre")];
  EXPECT_EQ(goitre.freq_one, 1.0);
  EXPECT_EQ(goitre.resolution, 0.0);
  EXPECT_EQ(s[default_schema().index_of("sick")].freq_one, 0.0);
  EXPECT_EQ(s[default_schema().index_of("TSH")].resolution, 1.0);
}

TEST(Stats, ResolutionFollowsRecordingPrecision) {
  auto d = fixture({0.005, 1.25, 3});
  auto s = compute_stats(d);
  EXPECT_DOUBLE_EQ(s[default_schema().index_of("TSH")].resolution, 0.001);
  d = fixture({1.0 / 3.0, 1.0});
  s = compute_stats(d);
  EXPECT_EQ(s[default_schema().index_of("TSH")].resolution, 0.0);
}

TEST(Stats, EmptyDatasetIsAnError) {
  LabeledDataset d;
  d.schema = default_schema();
  try {
    compute_stats(d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyDataset);
  }
}

TEST(Stats, DeterministicAndOrderFree) {
  const auto& data = testing::standin();
  const auto a = compute_stats(data);
  const auto b = compute_stats(data);
  for (std::size_t j = 0; j < a.size(); ++j) {
    EXPECT_EQ(a[j].mean, b[j].mean);
    EXPECT_EQ(a[j].median, b[j].median);
  }
}

TEST(Split, ThyroidSizedArithmetic) {
  // 6385/582/175 at 0.2: round(1277) + round(116.4) + round(35) = 1428.
  const auto split = stratified_split(with_counts(6385, 582, 175), 0.2, 7);
  EXPECT_NEAR(static_cast<double>(split.test.size()), 1428.0, 2.0);
  EXPECT_NEAR(static_cast<double>(split.test.class_counts()[2]), 35.0, 1.0);
  EXPECT_EQ(split.train.size() + split.test.size(), 7142u);
}

TEST(Split, DisjointCompleteAndDeterministic) {
  const auto& data = testing::standin();
  for (auto seed : {1u, 2u, 3u}) {
    const auto a = stratified_split(data, 0.2, seed);
    const auto b = stratified_split(data, 0.2, seed);
    EXPECT_EQ(a.test.records, b.test.records);
    std::set<std::string> train_ids;
    for (const auto& r : a.train.records) train_ids.insert(r.id);
    std::set<std::string> all = train_ids;
    for (const auto& r : a.test.records) {
      EXPECT_FALSE(train_ids.contains(r.id));
      all.insert(r.id);
    }
    EXPECT_EQ(all.size(), data.size());
    const auto full = data.class_counts();
    const auto test = a.test.class_counts();
    for (int c = 0; c < 3; ++c) {
      EXPECT_LE(std::abs(static_cast<double>(test[c]) - 0.2 * static_cast<double>(full[c])), 1.0);
    }
  }
  EXPECT_NE(stratified_split(data, 0.2, 1).test.records,
            stratified_split(data, 0.2, 2).test.records);
}

TEST(Split, Preconditions) {
  EXPECT_THROW(stratified_split(with_counts(10, 10, 1), 0.2, 1), Error);
  EXPECT_THROW(stratified_split(with_counts(10, 10, 10), 0.0, 1), Error);
  EXPECT_THROW(stratified_split(with_counts(10, 10, 10), 1.0, 1), Error);
}

TEST(Folds, TenFoldPartition) {
  const auto data = with_counts(6385, 582, 175);
  const auto folds = kfold_indices(data, 10, 3);
  ASSERT_EQ(folds.size(), 10u);
  std::vector<int> seen(data.size(), 0);
  for (const auto& f : folds) {
    EXPECT_TRUE(f.validation.size() == 714 || f.validation.size() == 715) << f.validation.size();
    EXPECT_EQ(f.train.size() + f.validation.size(), data.size());
    std::set<std::size_t> train(f.train.begin(), f.train.end());
    for (auto i : f.validation) {
      EXPECT_FALSE(train.contains(i));
      ++seen[i];
    }
    // Stratified: each class within one record of its share.
    std::array<int, 3> per{};
    for (auto i : f.validation) ++per[static_cast<std::size_t>(data.labels[i].index())];
    EXPECT_NEAR(per[0], 638.5, 1.0);
    EXPECT_NEAR(per[1], 58.2, 1.0);
    EXPECT_NEAR(per[2], 17.5, 1.0);
  }
  EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int n) { return n == 1; }));
  const auto again = kfold_indices(data, 10, 3);
  for (std::size_t i = 0; i < folds.size(); ++i) EXPECT_EQ(again[i].validation, folds[i].validation);
}

TEST(Folds, MinimalBalancedFixture) {
  const auto data = with_counts(2, 2, 0);
  const auto folds = kfold_indices(data, 2, 1);
  ASSERT_EQ(folds.size(), 2u);
  EXPECT_EQ(folds[0].validation.size(), 2u);
  EXPECT_EQ(folds[1].validation.size(), 2u);
  std::set<std::size_t> u(folds[0].validation.begin(), folds[0].validation.end());
  u.insert(folds[1].validation.begin(), folds[1].validation.end());
  EXPECT_EQ(u.size(), 4u);
}

TEST(Folds, Preconditions) {
  EXPECT_THROW(kfold_indices(with_counts(50, 50, 5), 10, 1), Error);
  EXPECT_THROW(kfold_indices(with_counts(50, 50, 50), 1, 1), Error);
}

TEST(Dataset, SubsetKeepsOrder) {
  const auto data = with_counts(3, 2, 1);
  const std::vector<std::size_t> idx{5, 0, 3};
  const auto sub = data.subset(idx);
  ASSERT_EQ(sub.size(), 3u);
  EXPECT_EQ(sub.records[0].id, "r5");
  EXPECT_EQ(sub.labels[0].index(), 2);
  EXPECT_EQ(sub.records[2].id, "r3");
}

}  // namespace
}  // namespace hxai
