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

// Multi-class gradient-boosted regression trees with a softmax objective.
//
// Each boosting round fits one regression tree per class to the first and
// second derivatives of the cross-entropy loss. Splits are found by exact
// greedy search over midpoints of sorted unique feature values, scored with
// the second-order gain and L2 leaf regularisation.

#ifndef HXAI_GBDT_HPP_
#define HXAI_GBDT_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hxai/classifier.hpp"
#include "hxai/tabular.hpp"

namespace hxai {

struct TrainConfig {
  int n_rounds = 100;
  int max_depth = 4;
  double learning_rate = 0.1;
  int min_samples_leaf = 5;
  double subsample_fraction = 1.0;
  std::uint64_t seed = 0;
  double l2_lambda = 1.0;

  // Throws Error(kValidation) naming the first out-of-range field.
  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

// Flat node arrays; feature == -1 marks a leaf. Samples with
// x[feature] < threshold go left.
struct Tree {
  std::vector<int> feature;
  std::vector<double> threshold;
  std::vector<int> left;
  std::vector<int> right;
  std::vector<double> value;

  std::size_t size() const { return feature.size(); }
  double predict(std::span<const double> x) const {
    int node = 0;
    while (feature[static_cast<std::size_t>(node)] >= 0) {
      const auto n = static_cast<std::size_t>(node);
      node = x[static_cast<std::size_t>(feature[n])] < threshold[n] ? left[n] : right[n];
    }
    return value[static_cast<std::size_t>(node)];
  }
  bool operator==(const Tree&) const = default;
};

class GbdtModel final : public Classifier {
 public:
  using Scores = std::array<double, kNumClasses>;

  GbdtModel() = default;
  // Throws Error(kModelFormat) when the per-class tree counts differ or a tree
  // is malformed.
  GbdtModel(std::string schema_fingerprint, std::size_t num_features, Scores base_scores,
            std::array<std::vector<Tree>, kNumClasses> trees, TrainConfig config);

  std::size_t num_features() const override { return num_features_; }
  const std::string& schema_fingerprint() const override { return fingerprint_; }
  Probabilities predict_proba(std::span<const double> values) const override;
  void predict_proba_batch(std::span<const double> rows,
                           std::span<Probabilities> out) const override;

  // Additive per-class scores before the softmax.
  Scores raw_scores(std::span<const double> values) const;

  const Scores& base_scores() const { return base_scores_; }
  const std::array<std::vector<Tree>, kNumClasses>& trees() const { return trees_; }
  std::size_t rounds() const { return trees_[0].size(); }
  const TrainConfig& config() const { return config_; }


 private:
  std::string fingerprint_;
  std::size_t num_features_ = 0;
  Scores base_scores_{};
  std::array<std::vector<Tree>, kNumClasses> trees_;
  TrainConfig config_;
};

Probabilities softmax(const GbdtModel::Scores& scores);

// Throws Error(kEmptyDataset) on an empty dataset and Error(kPrecondition)
// when a class is absent. When loss_history is given it receives the
// training cross-entropy after every round (index 0 = base scores only).
GbdtModel train(const LabeledDataset& data, const TrainConfig& config,
                std::vector<double>* loss_history = nullptr);

// Mean cross-entropy of `model` on `data`.
double cross_entropy(const Classifier& model, const LabeledDataset& data);

struct EvalReport {
  double accuracy = 0.0;
  std::array<double, kNumClasses> precision{};
  std::array<double, kNumClasses> recall{};
  std::array<double, kNumClasses> f1{};
  // confusion[true][predicted]
  std::array<std::array<std::size_t, kNumClasses>, kNumClasses> confusion{};
};

EvalReport report_from_confusion(
    const std::array<std::array<std::size_t, kNumClasses>, kNumClasses>& confusion);
// Throws Error(kEmptyDataset) for an empty test set.
EvalReport evaluate(const Classifier& model, const LabeledDataset& test);

struct CvReport {
  std::vector<EvalReport> folds;
  // Unweighted means over folds.
  double mean_accuracy = 0.0;
  std::array<double, kNumClasses> mean_precision{};
  std::array<double, kNumClasses> mean_recall{};
  std::array<double, kNumClasses> mean_f1{};
};

CvReport cross_validate(const LabeledDataset& data, const TrainConfig& config, std::size_t k,
                        std::uint64_t seed);

struct GridSearchResult {
  TrainConfig best;
  std::vector<std::pair<TrainConfig, double>> scored;  // config, mean CV accuracy
};

// Small grid over max_depth x learning_rate x n_rounds, scored by k-fold CV.
GridSearchResult grid_search(const LabeledDataset& data, const TrainConfig& base, std::size_t k,
                             std::uint64_t seed);

// Versioned JSON artifact. Serialisation is deterministic: equal models
// produce identical bytes.
inline constexpr int kModelFormatVersion = 1;
std::string serialize_model(const GbdtModel& model);
GbdtModel parse_model(std::string_view text);
void save_model(const GbdtModel& model, const std::filesystem::path& path);
GbdtModel load_model(const std::filesystem::path& path);

// TrainConfig as JSON ({"n_rounds": 100, ...}); absent keys keep defaults.
TrainConfig parse_train_config(std::string_view json_text);
std::string train_config_to_json(const TrainConfig& config);

}  // namespace hxai

#endif  // HXAI_GBDT_HPP_
