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


#include "hxai/toys.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "hxai/gbdt.hpp"
#include "hxai/rng.hpp"

namespace hxai {
namespace {

Record base_record() {
  const auto& s = default_schema();
  Record r{"toy", std::vector<double>(s.size(), 0.0)};
  r.values[s.index_of("age")] = 50;
  r.values[s.index_of("TSH")] = 1.5;
  r.values[s.index_of("T3")] = 2.0;
  r.values[s.index_of("TT4")] = 100;
  r.values[s.index_of("T4U")] = 1.0;
  r.values[s.index_of("FTI")] = 100;
  return r;
}

std::vector<double> steps(double lo, double hi, double step) {
  std::vector<double> out;
  const auto n = static_cast<int>(std::lround((hi - lo) / step));
  for (int i = 0; i <= n; ++i) out.push_back(lo + step * i);
  return out;
}

Probabilities one_hot(int c) {
  Probabilities p{0.1, 0.1, 0.1};
  p[static_cast<std::size_t>(c)] = 0.8;
  return p;
}

// Fills grid, stats, profile and the seeding pool from per-feature axes.
void finish(ToyProblem& toy, const std::vector<std::pair<std::string, std::vector<double>>>& axes,
            std::uint64_t seed) {
  const auto& s = default_schema();
  toy.grid.assign(s.size(), {});
  toy.stats.features.assign(s.size(), {});
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double q = toy.query.values[j];
    toy.grid[j] = {q};
    auto& f = toy.stats.features[j];
    f.min = f.max = f.mean = f.median = q;
  }
  for (const auto& [name, axis] : axes) {
    const auto j = s.index_of(name);
    toy.grid[j] = axis;
    auto& f = toy.stats.features[j];
    f.min = axis.front();
    f.max = axis.back();
    f.mean = f.median = 0.5 * (f.min + f.max);
    f.stddev = (f.max - f.min) / std::sqrt(12.0);
    f.mad = 0.25 * (f.max - f.min);
    f.freq_one = s.feature(j).kind == FeatureKind::kBoolean ? 0.5 : 0.0;
  }
  toy.profile = make_distance_profile(s, toy.stats);

  // Uniform draws inside the box, labelled by the toy model.
  Rng rng(derive_seed(seed, 0x7011));
  toy.data.schema = s;
  for (int i = 0; i < 40; ++i) {
    Record r = toy.query;
    r.id = "pool" + std::to_string(i);
    for (const auto& [name, axis] : axes) {
      const auto j = s.index_of(name);
      double v = std::uniform_real_distribution<double>(axis.front(), axis.back())(rng);
      if (s.feature(j).kind != FeatureKind::kReal) v = std::round(v);
      r.values[j] = v;
    }
    toy.data.labels.push_back(argmax_class(toy.model->predict_proba(r.values)));
    toy.data.records.push_back(std::move(r));
  }
}

ToyProblem function_toy(std::string name, std::string description, FunctionClassifier::Fn fn,
                        int target) {
  ToyProblem toy;
  toy.name = std::move(name);
  toy.description = std::move(description);
  toy.model = std::make_shared<FunctionClassifier>(default_schema(), std::move(fn));
  toy.query = base_record();
  toy.query.id = toy.name;
  toy.target = ClassLabel(target);
  return toy;
}

ToyProblem threshold_toy() {
  const auto tsh = default_schema().index_of("TSH");
  auto toy = function_toy("threshold", "class 2 iff TSH > 5; query TSH = 3; grid TSH 0..10",
                          [tsh](std::span<const double> x) { return one_hot(x[tsh] > 5 ? 2 : 0); },
                          2);
  toy.query.values[tsh] = 3;
  finish(toy, {{"TSH", steps(0, 10, 1)}}, 1);
  return toy;
}

ToyProblem sum_toy() {
  const auto t3 = default_schema().index_of("T3");
  const auto t4u = default_schema().index_of("T4U");
  auto toy = function_toy(
      "sum", "class 1 iff T3 + T4U >= 4; query (1, 0.5)",
      [=](std::span<const double> x) { return one_hot(x[t3] + x[t4u] >= 4 ? 1 : 0); }, 1);
  toy.query.values[t3] = 1.0;
  toy.query.values[t4u] = 0.5;
  finish(toy, {{"T3", steps(0, 5, 0.5)}, {"T4U", steps(0, 2, 0.25)}}, 2);
  return toy;
}

ToyProblem box_toy() {
  const auto tsh = default_schema().index_of("TSH");
  const auto fti = default_schema().index_of("FTI");
  auto toy = function_toy(
      "box", "class 2 iff TSH > 6 and FTI < 60; query (2, 100); needs two changes",
      [=](std::span<const double> x) { return one_hot(x[tsh] > 6 && x[fti] < 60 ? 2 : 0); }, 2);
  toy.query.values[tsh] = 2;
  toy.query.values[fti] = 100;
  finish(toy, {{"TSH", steps(0, 10, 1)}, {"FTI", steps(0, 200, 10)}}, 3);
  return toy;
}

ToyProblem boolean_or_toy() {
  const auto meds = default_schema().index_of("on_antithyroid_meds");
  const auto t3 = default_schema().index_of("T3");
  auto toy = function_toy(
      "boolean-or", "class 1 iff on_antithyroid_meds = 1 or T3 > 8; query (0, 2)",
      [=](std::span<const double> x) { return one_hot(x[meds] > 0.5 || x[t3] > 8 ? 1 : 0); }, 1);
  toy.query.values[meds] = 0;
  toy.query.values[t3] = 2;
  finish(toy, {{"on_antithyroid_meds", {0, 1}}, {"T3", steps(0, 10, 1)}}, 4);
  return toy;
}

ToyProblem trained_toy() {
  const auto& s = default_schema();
  const auto tsh = s.index_of("TSH");
  const auto tt4 = s.index_of("TT4");
  const auto age = s.index_of("age");
  auto rule = [=](std::span<const double> x) {
    if (x[tsh] > 8 && x[tt4] < 80) return 2;
    if (x[tt4] > 150 && x[age] < 60) return 1;
    return 0;
  };
  LabeledDataset train_set;
  train_set.schema = s;
  Rng rng(derive_seed(77, 0x7012));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 900; ++i) {
    Record r = base_record();
    r.id = "t" + std::to_string(i);
    r.values[tsh] = 20 * u(rng);
    r.values[tt4] = 200 * u(rng);
    r.values[age] = std::round(20 + 60 * u(rng));
    train_set.labels.emplace_back(rule(r.values));
    train_set.records.push_back(std::move(r));
  }
  TrainConfig cfg;
  cfg.n_rounds = 30;
  cfg.max_depth = 3;
  cfg.learning_rate = 0.3;
  cfg.seed = 77;

  ToyProblem toy;
  toy.name = "trained";
  toy.description = "30-round GBDT over TSH, TT4, age; query (2, 100, 50) seeks class 2";
  toy.model = std::make_shared<GbdtModel>(train(train_set, cfg));
  toy.query = base_record();
  toy.query.id = toy.name;
  toy.query.values[tsh] = 2;
  toy.query.values[tt4] = 100;
  toy.query.values[age] = 50;
  toy.target = ClassLabel(2);
  finish(toy, {{"age", steps(20, 80, 5)}, {"TSH", steps(0, 20, 1)}, {"TT4", steps(0, 200, 10)}},
         5);
  return toy;
}

}  // namespace

std::vector<ToyProblem> bundled_toys() {
  std::vector<ToyProblem> out;
  out.push_back(threshold_toy());
  out.push_back(sum_toy());
  out.push_back(box_toy());
  out.push_back(boolean_or_toy());
  out.push_back(trained_toy());
  return out;
}

ToyProblem empty_toy() {
  auto toy = function_toy("empty", "constant class 0; asks for class 1",
                          [](std::span<const double>) { return one_hot(0); }, 1);
  finish(toy, {{"TSH", steps(0, 10, 1)}}, 6);
  return toy;
}

OracleCheck run_oracle_check(const ToyProblem& toy, std::uint64_t seed, int generations) {
  const auto& schema = default_schema();
  OracleCheck out;
  out.toy = toy.name;
  out.seed = seed;

  const auto oracle =
      brute_force_oracle(*toy.model, schema, toy.query, toy.target, toy.grid, toy.profile);
  CfConfig cfg;
  cfg.target_class = toy.target;
  cfg.k = 3;
  cfg.generations = generations;
  cfg.seed = seed;
  const auto found = generate_counterexamples(*toy.model, schema, toy.query, cfg, toy.profile,
                                              toy.data);
  if (!found.items.empty()) {
    out.search_proximity = found.items.front().proximity;
    out.search_sparsity = found.items.front().sparsity;
  }

  out.feasible = oracle.best.has_value();
  if (!out.feasible) {
    // Nothing to beat; vacuous pass.
    out.ratio = 0.0;
    out.pass = true;
    return out;
  }
  out.oracle_proximity = oracle.best->proximity;
  out.oracle_sparsity = oracle.best->sparsity;
  if (!out.search_proximity) {
    out.ratio = std::numeric_limits<double>::infinity();
    out.pass = false;
    return out;
  }
  out.ratio = *out.search_proximity / out.oracle_proximity;
  out.pass = out.ratio <= kOracleRatioBound && out.search_sparsity <= out.oracle_sparsity + 1;
  return out;
}

}  // namespace hxai
