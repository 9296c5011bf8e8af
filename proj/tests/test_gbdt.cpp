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
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>

#include "hxai/error.hpp"
#include "hxai/gbdt.hpp"
#include "hxai/toys.hpp"
#include "test_support.hpp"

namespace hxai {
namespace {

using testing::make_record;

struct Stump {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
  double left_value = 0.0;
  double right_value = 0.0;
};

// Independent exhaustive search for the best depth-1 tree: every feature,
// every midpoint between distinct sorted values, sums recomputed from
// scratch for each candidate.
Stump brute_force_stump(const LabeledDataset& data, std::size_t cls, double lambda,
                        std::size_t min_leaf, double lr) {
  const auto counts = data.class_counts();
  const double n = static_cast<double>(data.size());
  std::array<double, 3> base{};
  for (std::size_t c = 0; c < 3; ++c) base[c] = std::log(static_cast<double>(counts[c]) / n);
  double z = 0.0;
  for (double b : base) z += std::exp(b);
  const double p = std::exp(base[cls]) / z;

  std::vector<double> g(data.size());
  std::vector<double> h(data.size(), p * (1.0 - p));
  for (std::size_t i = 0; i < data.size(); ++i) {
    g[i] = p - (static_cast<std::size_t>(data.labels[i].index()) == cls ? 1.0 : 0.0);
  }
  auto score = [&](double gs, double hs) { return gs * gs / (hs + lambda); };

  Stump best;
  double gt = 0.0, ht = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) { gt += g[i]; ht += h[i]; }
  for (std::size_t f = 0; f < data.schema.size(); ++f) {
    std::set<double> values;
    for (const auto& r : data.records) values.insert(r.values[f]);
    std::vector<double> v(values.begin(), values.end());
    for (std::size_t k = 1; k < v.size(); ++k) {
      const double thr = 0.5 * (v[k - 1] + v[k]);
      double gl = 0.0, hl = 0.0;
      std::size_t nl = 0;
      for (std::size_t i = 0; i < data.size(); ++i) {
        if (data.records[i].values[f] < thr) { gl += g[i]; hl += h[i]; ++nl; }
      }
      if (nl < min_leaf || data.size() - nl < min_leaf) continue;
      const double gain = 0.5 * (score(gl, hl) + score(gt - gl, ht - hl) - score(gt, ht));
      if (gain > best.gain + 1e-12) {
        best = {static_cast<int>(f), thr, gain, -gl / (hl + lambda) * lr,
                -(gt - gl) / (ht - hl + lambda) * lr};
      }
    }
  }
  return best;
}

TEST(Gbdt, StumpMatchesExhaustiveSearch) {
  const auto data = testing::small_standin(9, 40);
  TrainConfig cfg;
  cfg.n_rounds = 1;
  cfg.max_depth = 1;
  cfg.learning_rate = 0.5;
  cfg.min_samples_leaf = 3;
  const auto model = train(data, cfg);
  for (std::size_t c = 0; c < 3; ++c) {
    const auto oracle = brute_force_stump(data, c, cfg.l2_lambda, 3, cfg.learning_rate);
    const auto& tree = model.trees()[c][0];
    ASSERT_EQ(tree.size(), 3u) << "class " << c;
    EXPECT_EQ(tree.feature[0], oracle.feature) << "class " << c;
    EXPECT_DOUBLE_EQ(tree.threshold[0], oracle.threshold);
    EXPECT_NEAR(tree.value[static_cast<std::size_t>(tree.left[0])], oracle.left_value, 1e-12);
    EXPECT_NEAR(tree.value[static_cast<std::size_t>(tree.right[0])], oracle.right_value, 1e-12);
  }
}

TEST(Gbdt, ZeroRoundModelIsUniform) {
  GbdtModel m(default_schema().fingerprint(), 20, {0, 0, 0}, {}, TrainConfig{});
  const auto p = m.predict_proba(make_record("a").values);
  for (double v : p) EXPECT_DOUBLE_EQ(v, 1.0 / 3.0);
  EXPECT_EQ(predict_class(m, default_schema(), make_record("a")).index(), 0);
}

TEST(Gbdt, ArgmaxTieBreak) {
  EXPECT_EQ(argmax_class({0.1, 0.7, 0.2}).index(), 1);
  EXPECT_EQ(argmax_class({0.5, 0.5, 0.0}).index(), 0);
  EXPECT_EQ(argmax_class({0.2, 0.4, 0.4}).index(), 1);
  EXPECT_EQ(argmax_class({1.0 / 3, 1.0 / 3, 1.0 / 3}).index(), 0);
}

TEST(Gbdt, NormalisationAndConsistencyOnEveryRecord) {
  const auto model = testing::standin_model();
  const auto& data = testing::standin();
  for (std::size_t i = 0; i < data.size(); i += 7) {
    const auto p = predict_proba(*model, default_schema(), data.records[i]);
    double sum = 0.0;
    for (double v : p) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
    const auto best = std::max_element(p.begin(), p.end()) - p.begin();
    EXPECT_EQ(predict_class(*model, default_schema(), data.records[i]).index(), best);
  }
}

TEST(Gbdt, SeparableFixture) {
  const auto data = testing::separable(30);
  TrainConfig cfg;
  cfg.n_rounds = 20;
  const auto model = train(data, cfg);
  EXPECT_EQ(predict_class(model, default_schema(), make_record("x", {{"TSH", 0.001}})).index(), 1);
  EXPECT_EQ(predict_class(model, default_schema(), make_record("x", {{"TSH", 40}})).index(), 2);
  EXPECT_EQ(predict_class(model, default_schema(), make_record("x", {{"TSH", 1.1}})).index(), 0);
  EXPECT_EQ(evaluate(model, data).accuracy, 1.0);
}

TEST(Gbdt, TrainingLossIsNonIncreasing) {
  const auto data = testing::small_standin(3, 10);
  std::vector<double> history;
  TrainConfig cfg;
  cfg.n_rounds = 40;
  train(data, cfg, &history);
  ASSERT_EQ(history.size(), 41u);
  for (std::size_t r = 1; r < history.size(); ++r) {
    EXPECT_LE(history[r], history[r - 1] + 1e-9) << "round " << r;
  }
  EXPECT_LT(history.back(), history.front());
}

TEST(Gbdt, DeterministicArtifactBytes) {
  const auto data = testing::small_standin(4, 10);
  TrainConfig cfg;
  cfg.n_rounds = 15;
  cfg.subsample_fraction = 0.7;
  cfg.seed = 99;
  EXPECT_EQ(serialize_model(train(data, cfg)), serialize_model(train(data, cfg)));
  auto other = cfg;
  other.seed = 100;
  EXPECT_NE(serialize_model(train(data, cfg)), serialize_model(train(data, other)));
}

TEST(Gbdt, TrainErrors) {
  LabeledDataset empty;
  empty.schema = default_schema();
  try {
    train(empty, TrainConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyDataset);
  }
  auto two_class = testing::separable(5);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < two_class.size(); ++i) {
    if (two_class.labels[i].index() != 2) keep.push_back(i);
  }
  try {
    train(two_class.subset(keep), TrainConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPrecondition);
  }
  using Mutator = void (*)(TrainConfig&);
  for (Mutator bad : std::vector<Mutator>{[](TrainConfig& c) { c.n_rounds = 0; },
                   [](TrainConfig& c) { c.max_depth = 0; },
                   [](TrainConfig& c) { c.learning_rate = 0; },
                   [](TrainConfig& c) { c.min_samples_leaf = 0; },
                   [](TrainConfig& c) { c.subsample_fraction = 1.5; },
                   [](TrainConfig& c) { c.l2_lambda = -1; }}) {
    TrainConfig cfg;
    bad(cfg);
    EXPECT_THROW(cfg.validate(), Error);
  }
}

TEST(Evaluate, PerfectAndInverted) {
  const auto data = testing::separable(10);
  const auto tsh = default_schema().index_of("TSH");
  auto label_of = [tsh](std::span<const double> x) {
    return x[tsh] < 0.5 ? 1 : x[tsh] < 10 ? 0 : 2;
  };
  FunctionClassifier perfect(default_schema(), [&](std::span<const double> x) {
    Probabilities p{};
    p[static_cast<std::size_t>(label_of(x))] = 1.0;
    return p;
  });
  const auto good = evaluate(perfect, data);
  EXPECT_EQ(good.accuracy, 1.0);
  for (double f : good.f1) EXPECT_EQ(f, 1.0);

  FunctionClassifier wrong(default_schema(), [&](std::span<const double> x) {
    Probabilities p{};
    p[static_cast<std::size_t>((label_of(x) + 1) % 3)] = 1.0;
    return p;
  });
  const auto bad = evaluate(wrong, data);
  EXPECT_EQ(bad.accuracy, 0.0);
  for (double f : bad.f1) EXPECT_EQ(f, 0.0);

  LabeledDataset empty;
  empty.schema = default_schema();
  EXPECT_THROW(evaluate(perfect, empty), Error);
}

TEST(Evaluate, MetricsFromConfusionByHand) {
  // rows = truth, columns = prediction.
  const auto r = report_from_confusion({{{8, 1, 1}, {2, 5, 0}, {0, 0, 3}}});
  EXPECT_DOUBLE_EQ(r.accuracy, 16.0 / 20.0);
  EXPECT_DOUBLE_EQ(r.precision[0], 8.0 / 10.0);
  EXPECT_DOUBLE_EQ(r.recall[0], 8.0 / 10.0);
  EXPECT_DOUBLE_EQ(r.precision[1], 5.0 / 6.0);
  EXPECT_DOUBLE_EQ(r.recall[1], 5.0 / 7.0);
  EXPECT_DOUBLE_EQ(r.f1[1], 2.0 * (5.0 / 6) * (5.0 / 7) / (5.0 / 6 + 5.0 / 7));
  EXPECT_DOUBLE_EQ(r.precision[2], 3.0 / 4.0);
  EXPECT_DOUBLE_EQ(r.recall[2], 1.0);
}

TEST(CrossValidate, SeparableTwoFold) {
  const auto data = testing::separable(12);
  TrainConfig cfg;
  cfg.n_rounds = 10;
  cfg.min_samples_leaf = 2;
  const auto cv = cross_validate(data, cfg, 2, 5);
  ASSERT_EQ(cv.folds.size(), 2u);
  for (const auto& f : cv.folds) EXPECT_EQ(f.accuracy, 1.0);
  EXPECT_EQ(cv.mean_accuracy, 1.0);
}

TEST(CrossValidate, DeterministicUnderSeed) {
  const auto data = testing::small_standin(8, 20);
  TrainConfig cfg;
  cfg.n_rounds = 10;
  const auto a = cross_validate(data, cfg, 3, 42);
  const auto b = cross_validate(data, cfg, 3, 42);
  EXPECT_EQ(a.mean_accuracy, b.mean_accuracy);
  EXPECT_EQ(a.mean_f1, b.mean_f1);
  double mean = 0.0;
  for (const auto& f : a.folds) mean += f.accuracy / 3.0;
  EXPECT_NEAR(a.mean_accuracy, mean, 1e-12);
}

// Real thyroid file when one is configured, else the stand-in.
LabeledDataset benchmark_data() {
  std::filesystem::path p;
  if (const char* env = std::getenv("HXAI_THYROID_CSV"); env && *env) p = env;
  if (p.empty() && std::filesystem::exists(HXAI_SOURCE_DIR "/data/thyroid.csv")) {
    p = HXAI_SOURCE_DIR "/data/thyroid.csv";
  }
  if (p.empty()) return testing::standin();
  std::ifstream in(p, std::ios::binary);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (text.rfind("id,", 0) != 0 && text.rfind("age,", 0) != 0) {
    text = convert_uci_thyroid0387(text, default_schema()).csv;
  }
  return ingest_csv_text(text, default_schema()).data;
}

TEST(CrossValidate, BeatsMajorityBaselineForEverySeed) {
  const auto data = benchmark_data();
  const auto counts = data.class_counts();
  const double majority = static_cast<double>(*std::max_element(counts.begin(), counts.end())) /
                          static_cast<double>(data.size());
  for (auto seed : kSeedSuite) {
    TrainConfig cfg;
    cfg.seed = seed;
    const auto cv = cross_validate(data, cfg, 10, seed);
    EXPECT_GE(cv.mean_accuracy, majority + 0.05) << "seed " << seed;
  }
}

TEST(CrossValidate, GridSearchPicksTheBestScored) {
  const auto data = testing::separable(8);
  TrainConfig base;
  base.min_samples_leaf = 2;
  const auto grid = grid_search(data, base, 2, 1);
  EXPECT_EQ(grid.scored.size(), 12u);
  double best = -1;
  for (const auto& [cfg, score] : grid.scored) best = std::max(best, score);
  const auto it = std::find_if(grid.scored.begin(), grid.scored.end(),
                               [&](const auto& p) { return p.first == grid.best; });
  ASSERT_NE(it, grid.scored.end());
  EXPECT_EQ(it->second, best);
}

TEST(ModelIo, RoundTripIsBitwise) {
  const auto data = testing::small_standin(6, 10);
  TrainConfig cfg;
  cfg.n_rounds = 25;
  const auto model = train(data, cfg);
  const auto path = std::filesystem::temp_directory_path() / "hxai_model_rt.json";
  save_model(model, path);
  const auto loaded = load_model(path);
  for (std::size_t i = 0; i < 100; ++i) {
    const auto& r = data.records[i * data.size() / 100];
    const auto a = model.predict_proba(r.values);
    const auto b = loaded.predict_proba(r.values);
    for (int c = 0; c < 3; ++c) EXPECT_EQ(a[c], b[c]);  // bitwise
  }
  EXPECT_EQ(serialize_model(loaded), serialize_model(model));

  // Truncated file: an error, never a partial model.
  std::string text = serialize_model(model);
  { std::ofstream(path) << text.substr(0, text.size() / 2); }
  try {
    load_model(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kModelFormat);
  }
  std::filesystem::remove(path);
  EXPECT_THROW(load_model(path), Error);
}

TEST(ModelIo, VersionAndShapeChecks) {
  const auto model = train(testing::separable(10), TrainConfig{.n_rounds = 2});
  auto text = serialize_model(model);
  const auto pos = text.find("\"version\"");
  ASSERT_NE(pos, std::string::npos) << text.substr(0, 200);
  auto bumped = text;
  const auto colon = bumped.find(':', pos);
  const auto end = bumped.find_first_of(",}", colon);
  bumped.replace(colon + 1, end - colon - 1, "99");
  EXPECT_THROW(parse_model(bumped), Error);
  EXPECT_THROW(parse_model("{}"), Error);
  EXPECT_THROW(parse_model("not json"), Error);
}

TEST(ModelIo, FingerprintGuardAtPredictTime) {
  const auto model = train(testing::separable(10), TrainConfig{.n_rounds = 2});
  std::string doc = "sex | boolean\nage | integer\n";
  for (auto name : thyroid_feature_names()) {
    if (name == "age" || name == "sex") continue;
    const auto& f = default_schema().feature(default_schema().index_of(name));
    doc += f.name + " | " + std::string(to_string(f.kind)) + "\n";
  }
  const auto other = load_schema(doc);
  try {
    predict_proba(model, other, make_record("a"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaMismatch);
  }
  EXPECT_NO_THROW(predict_proba(model, default_schema(), make_record("a")));
}

TEST(TrainConfigJson, RoundTripAndDefaults) {
  TrainConfig cfg;
  cfg.n_rounds = 7;
  cfg.learning_rate = 0.25;
  cfg.seed = 12345678901234ULL;
  EXPECT_EQ(parse_train_config(train_config_to_json(cfg)), cfg);
  EXPECT_EQ(parse_train_config("{}"), TrainConfig{});
  EXPECT_EQ(parse_train_config(R"({"max_depth": 6})").max_depth, 6);
  EXPECT_THROW(parse_train_config("{"), Error);
}

}  // namespace
}  // namespace hxai
