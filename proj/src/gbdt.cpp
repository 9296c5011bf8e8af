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

#include "hxai/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hxai/error.hpp"
#include "hxai/kernels.hpp"
#include "hxai/rng.hpp"

namespace hxai {

ClassLabel argmax_class(const Probabilities& p) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumClasses; ++c) {
    if (p[c] > p[best]) best = c;
  }
  return ClassLabel(static_cast<int>(best));
}

void Classifier::predict_proba_batch(std::span<const double> rows,
                                     std::span<Probabilities> out) const {
  kernels::classifier_proba(*this, rows, out, kernels::Exec::kParallel);
}

void check_schema(const Classifier& model, const DatasetSchema& schema) {
  if (model.schema_fingerprint() != schema.fingerprint() ||
      model.num_features() != schema.size()) {
    throw Error(ErrorCode::kSchemaMismatch,
                "schema fingerprint mismatch: model " + model.schema_fingerprint() +
                    ", records " + schema.fingerprint());
  }
}

Probabilities predict_proba(const Classifier& model, const DatasetSchema& schema,
                            const Record& record) {
  check_schema(model, schema);
  if (record.values.size() != schema.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "record " + record.id + " has wrong arity");
  }
  return model.predict_proba(record.values);
}

ClassLabel predict_class(const Classifier& model, const DatasetSchema& schema,
                         const Record& record) {
  return argmax_class(predict_proba(model, schema, record));
}

void TrainConfig::validate() const {
  auto fail = [](const char* what) {
    throw Error(ErrorCode::kValidation, std::string("invalid train config: ") + what);
  };
  if (n_rounds < 1) fail("n_rounds must be positive");
  if (max_depth < 1) fail("max_depth must be positive");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) fail("learning_rate must lie in (0,1]");
  if (min_samples_leaf < 1) fail("min_samples_leaf must be positive");
  if (!(subsample_fraction > 0.0 && subsample_fraction <= 1.0)) {
    fail("subsample_fraction must lie in (0,1]");
  }
  if (!(l2_lambda >= 0.0)) fail("l2_lambda must be non-negative");
}

Probabilities softmax(const GbdtModel::Scores& s) {
  const double m = *std::max_element(s.begin(), s.end());
  Probabilities p{};
  double z = 0.0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    p[c] = std::exp(s[c] - m);
    z += p[c];
  }
  for (auto& v : p) v /= z;
  return p;
}

GbdtModel::GbdtModel(std::string schema_fingerprint, std::size_t num_features, Scores base_scores,
                     std::array<std::vector<Tree>, kNumClasses> trees, TrainConfig config)
    : fingerprint_(std::move(schema_fingerprint)),
      num_features_(num_features),
      base_scores_(base_scores),
      trees_(std::move(trees)),
      config_(config) {
  for (const auto& per_class : trees_) {
    if (per_class.size() != trees_[0].size()) {
      throw Error(ErrorCode::kModelFormat, "tree count differs across classes");
    }
    for (const auto& t : per_class) {
      const std::size_t n = t.feature.size();
      if (n == 0 || t.threshold.size() != n || t.left.size() != n || t.right.size() != n ||
          t.value.size() != n) {
        throw Error(ErrorCode::kModelFormat, "malformed tree node arrays");
      }
      for (std::size_t k = 0; k < n; ++k) {
        if (t.feature[k] < 0) continue;
        if (static_cast<std::size_t>(t.feature[k]) >= num_features_ || t.left[k] <= static_cast<int>(k) ||
            t.right[k] <= static_cast<int>(k) || static_cast<std::size_t>(t.left[k]) >= n ||
            static_cast<std::size_t>(t.right[k]) >= n) {
          throw Error(ErrorCode::kModelFormat, "tree node out of range");
        }
      }
    }
  }
}

GbdtModel::Scores GbdtModel::raw_scores(std::span<const double> values) const {
  Scores s = base_scores_;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    for (const auto& tree : trees_[c]) s[c] += tree.predict(values);
  }
  return s;
}

Probabilities GbdtModel::predict_proba(std::span<const double> values) const {
  return softmax(raw_scores(values));
}

void GbdtModel::predict_proba_batch(std::span<const double> rows,
                                    std::span<Probabilities> out) const {
  kernels::ensemble_proba(*this, rows, out, kernels::Exec::kParallel);
}

namespace {

constexpr double kMinHessian = 1e-16;

struct TrainingMatrix {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> columns;         // feature-major
  std::vector<std::uint32_t> sorted;   // per-feature ascending order
};

TrainingMatrix build_matrix(const LabeledDataset& data) {
  TrainingMatrix m;
  m.n = data.size();
  m.d = data.schema.size();
  m.columns.resize(m.n * m.d);
  m.sorted.resize(m.n * m.d);
  for (std::size_t f = 0; f < m.d; ++f) {
    for (std::size_t i = 0; i < m.n; ++i) m.columns[f * m.n + i] = data.records[i].values[f];
    auto order = std::span(m.sorted).subspan(f * m.n, m.n);
    std::iota(order.begin(), order.end(), 0U);
    const double* col = &m.columns[f * m.n];
    std::stable_sort(order.begin(), order.end(),
                     [col](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
  }
  return m;
}

// Level-wise exact greedy growth of one regression tree.
Tree grow_tree(const TrainingMatrix& m, std::span<const double> grad,
               std::span<const double> hess, std::span<const std::uint8_t> active,
               const TrainConfig& cfg) {
  Tree tree;
  auto add_node = [&tree]() {
    tree.feature.push_back(-1);
    tree.threshold.push_back(0.0);
    tree.left.push_back(-1);
    tree.right.push_back(-1);
    tree.value.push_back(0.0);
    return static_cast<int>(tree.feature.size() - 1);
  };

  std::vector<int> node_of(m.n, -1);
  for (std::size_t i = 0; i < m.n; ++i) {
    if (active[i]) node_of[i] = 0;
  }
  std::vector<int> level_nodes = {add_node()};

  auto set_leaf_values = [&](const std::vector<int>& level) {
    std::vector<double> g(level.size(), 0.0);
    std::vector<double> h(level.size(), 0.0);
    for (std::size_t i = 0; i < m.n; ++i) {
      if (node_of[i] < 0) continue;
      g[static_cast<std::size_t>(node_of[i])] += grad[i];
      h[static_cast<std::size_t>(node_of[i])] += hess[i];
    }
    for (std::size_t k = 0; k < level.size(); ++k) {
      if (level[k] < 0) continue;
      tree.value[static_cast<std::size_t>(level[k])] =
          -g[k] / (h[k] + cfg.l2_lambda) * cfg.learning_rate;
    }
  };

  for (int depth = 0; depth < cfg.max_depth && !level_nodes.empty(); ++depth) {
    kernels::SplitInput in;
    in.num_samples = m.n;
    in.num_features = m.d;
    in.columns = m.columns;
    in.sorted = m.sorted;
    in.grad = grad;
    in.hess = hess;
    in.node_of = node_of;
    in.num_nodes = level_nodes.size();
    in.lambda = cfg.l2_lambda;
    in.min_samples_leaf = static_cast<std::size_t>(cfg.min_samples_leaf);
    const auto splits = kernels::best_splits(in, kernels::Exec::kParallel);

    // Finalise non-splitting nodes as leaves now, while node_of still maps
    // their samples.
    std::vector<int> leaves(level_nodes.size(), -1);
    for (std::size_t k = 0; k < level_nodes.size(); ++k) {
      if (splits[k].feature < 0) leaves[k] = level_nodes[k];
    }
    set_leaf_values(leaves);

    std::vector<int> next_level;
    std::vector<int> left_child(level_nodes.size(), -1);
    for (std::size_t k = 0; k < level_nodes.size(); ++k) {
      if (splits[k].feature < 0) continue;
      const auto node = static_cast<std::size_t>(level_nodes[k]);
      const int l = add_node();
      const int r = add_node();
      tree.feature[node] = splits[k].feature;
      tree.threshold[node] = splits[k].threshold;
      tree.left[node] = l;
      tree.right[node] = r;
      left_child[k] = static_cast<int>(next_level.size());
      next_level.push_back(l);
      next_level.push_back(r);
    }
    for (std::size_t i = 0; i < m.n; ++i) {
      if (node_of[i] < 0) continue;
      const auto k = static_cast<std::size_t>(node_of[i]);
      if (splits[k].feature < 0) {
        node_of[i] = -1;
        continue;
      }
      const double x = m.columns[static_cast<std::size_t>(splits[k].feature) * m.n + i];
      node_of[i] = left_child[k] + (x < splits[k].threshold ? 0 : 1);
    }
    level_nodes = std::move(next_level);
  }
  set_leaf_values(level_nodes);
  return tree;
}

double mean_cross_entropy(const std::vector<GbdtModel::Scores>& scores,
                          const std::vector<ClassLabel>& labels) {
  double loss = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const auto p = softmax(scores[i]);
    loss -= std::log(std::max(p[static_cast<std::size_t>(labels[i].index())], 1e-300));
  }
  return loss / static_cast<double>(scores.size());
}

}  // namespace

GbdtModel train(const LabeledDataset& data, const TrainConfig& config,
                std::vector<double>* loss_history) {
  config.validate();
  if (data.empty()) throw Error(ErrorCode::kEmptyDataset, "empty dataset");
  const auto counts = data.class_counts();
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (counts[c] == 0) {
      throw Error(ErrorCode::kPrecondition,
                  "class " + data.schema.class_name(ClassLabel(static_cast<int>(c))) +
                      " is absent from the training data");
    }
  }

  const TrainingMatrix m = build_matrix(data);
  const std::size_t n = m.n;

  // Base scores: centred log class priors.
  GbdtModel::Scores base{};
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    base[c] = std::log(static_cast<double>(counts[c]) / static_cast<double>(n));
  }
  const double centre = (base[0] + base[1] + base[2]) / 3.0;
  for (auto& b : base) b -= centre;

  std::vector<GbdtModel::Scores> scores(n, base);
  std::array<std::vector<Tree>, kNumClasses> trees;
  for (auto& t : trees) t.reserve(static_cast<std::size_t>(config.n_rounds));
  if (loss_history) {
    loss_history->clear();
    loss_history->push_back(mean_cross_entropy(scores, data.labels));
  }

  Rng rng(derive_seed(config.seed, 0x6bd7));
  std::vector<std::uint8_t> active(n, 1);
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0U);
  const auto n_sub = static_cast<std::size_t>(
      std::ceil(config.subsample_fraction * static_cast<double>(n)));

  std::vector<double> grad(n);
  std::vector<double> hess(n);
  std::vector<Probabilities> prob(n);
  std::vector<double> row(m.d);

  for (int round = 0; round < config.n_rounds; ++round) {
    if (n_sub < n) {
      std::shuffle(perm.begin(), perm.end(), rng);
      std::fill(active.begin(), active.end(), 0);
      for (std::size_t i = 0; i < n_sub; ++i) active[perm[i]] = 1;
    }
    for (std::size_t i = 0; i < n; ++i) prob[i] = softmax(scores[i]);

    std::array<Tree, kNumClasses> round_trees;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      for (std::size_t i = 0; i < n; ++i) {
        const double y = static_cast<std::size_t>(data.labels[i].index()) == c ? 1.0 : 0.0;
        grad[i] = prob[i][c] - y;
        hess[i] = std::max(prob[i][c] * (1.0 - prob[i][c]), kMinHessian);
      }
      round_trees[c] = grow_tree(m, grad, hess, active, config);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t f = 0; f < m.d; ++f) row[f] = m.columns[f * n + i];
      for (std::size_t c = 0; c < kNumClasses; ++c) scores[i][c] += round_trees[c].predict(row);
    }
    for (std::size_t c = 0; c < kNumClasses; ++c) trees[c].push_back(std::move(round_trees[c]));
    if (loss_history) loss_history->push_back(mean_cross_entropy(scores, data.labels));
  }

  return GbdtModel(data.schema.fingerprint(), m.d, base, std::move(trees), config);
}

double cross_entropy(const Classifier& model, const LabeledDataset& data) {
  if (data.empty()) throw Error(ErrorCode::kEmptyDataset, "empty dataset");
  double loss = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto p = model.predict_proba(data.records[i].values);
    loss -= std::log(std::max(p[static_cast<std::size_t>(data.labels[i].index())], 1e-300));
  }
  return loss / static_cast<double>(data.size());
}

EvalReport report_from_confusion(
    const std::array<std::array<std::size_t, kNumClasses>, kNumClasses>& confusion) {
  EvalReport r;
  r.confusion = confusion;
  std::size_t total = 0;
  std::size_t correct = 0;
  for (std::size_t t = 0; t < kNumClasses; ++t) {
    for (std::size_t p = 0; p < kNumClasses; ++p) total += confusion[t][p];
    correct += confusion[t][t];
  }
  r.accuracy = total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    std::size_t predicted = 0;
    std::size_t actual = 0;
    for (std::size_t k = 0; k < kNumClasses; ++k) {
      predicted += confusion[k][c];
      actual += confusion[c][k];
    }
    const double tp = static_cast<double>(confusion[c][c]);
    r.precision[c] = predicted == 0 ? 0.0 : tp / static_cast<double>(predicted);
    r.recall[c] = actual == 0 ? 0.0 : tp / static_cast<double>(actual);
    const double s = r.precision[c] + r.recall[c];
    r.f1[c] = s == 0.0 ? 0.0 : 2.0 * r.precision[c] * r.recall[c] / s;
  }
  return r;
}

EvalReport evaluate(const Classifier& model, const LabeledDataset& test) {
  if (test.empty()) throw Error(ErrorCode::kEmptyDataset, "empty dataset");
  check_schema(model, test.schema);
  const std::size_t d = test.schema.size();
  std::vector<double> rows(test.size() * d);
  for (std::size_t i = 0; i < test.size(); ++i) {
    std::copy(test.records[i].values.begin(), test.records[i].values.end(), rows.begin() + static_cast<std::ptrdiff_t>(i * d));
  }
  std::vector<Probabilities> probs(test.size());
  model.predict_proba_batch(rows, probs);

  std::array<std::array<std::size_t, kNumClasses>, kNumClasses> confusion{};
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto t = static_cast<std::size_t>(test.labels[i].index());
    const auto p = static_cast<std::size_t>(argmax_class(probs[i]).index());
    ++confusion[t][p];
  }
  return report_from_confusion(confusion);
}

CvReport cross_validate(const LabeledDataset& data, const TrainConfig& config, std::size_t k,
                        std::uint64_t seed) {
  const auto folds = kfold_indices(data, k, seed);
  CvReport out;
  for (const auto& fold : folds) {
    const auto train_set = data.subset(fold.train);
    const auto valid_set = data.subset(fold.validation);
    const auto model = train(train_set, config);
    out.folds.push_back(evaluate(model, valid_set));
  }
  const double inv = 1.0 / static_cast<double>(out.folds.size());
  for (const auto& r : out.folds) {
    out.mean_accuracy += r.accuracy * inv;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      out.mean_precision[c] += r.precision[c] * inv;
      out.mean_recall[c] += r.recall[c] * inv;
      out.mean_f1[c] += r.f1[c] * inv;
    }
  }
  return out;
}

GridSearchResult grid_search(const LabeledDataset& data, const TrainConfig& base, std::size_t k,
                             std::uint64_t seed) {
  GridSearchResult result;
  double best_score = -1.0;
  for (int depth : {3, 4, 6}) {
    for (double lr : {0.1, 0.3}) {
      for (int rounds : {50, 100}) {
        TrainConfig cfg = base;
        cfg.max_depth = depth;
        cfg.learning_rate = lr;
        cfg.n_rounds = rounds;
        const double score = cross_validate(data, cfg, k, seed).mean_accuracy;
        result.scored.emplace_back(cfg, score);
        if (score > best_score) {
          best_score = score;
          result.best = cfg;
        }
      }
    }
  }
  return result;
}

}  // namespace hxai
