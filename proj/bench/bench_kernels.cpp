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

// Serial vs OpenMP timings for the three hot kernels. Arg 0 is the serial
// reference, arg 1 the parallel path.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "hxai/counterfactual.hpp"
#include "hxai/gbdt.hpp"
#include "hxai/kernels.hpp"
#include "hxai/synthetic.hpp"

namespace {

using hxai::kernels::Exec;

const hxai::LabeledDataset& data() {
  static const auto d = hxai::make_thyroid_standin(hxai::default_schema(), hxai::StandinConfig{});
  return d;
}

std::vector<double> row_major(const hxai::LabeledDataset& d) {
  std::vector<double> rows;
  rows.reserve(d.size() * hxai::kNumFeatures);
  for (const auto& r : d.records) rows.insert(rows.end(), r.values.begin(), r.values.end());
  return rows;
}

Exec exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Exec::kSerial : Exec::kParallel;
}

void BM_EnsembleProba(benchmark::State& state) {
  static const auto model = [] {
    hxai::TrainConfig cfg;
    cfg.n_rounds = 50;
    return hxai::train(data(), cfg);
  }();
  static const auto rows = row_major(data());
  std::vector<hxai::Probabilities> out(data().size());
  for (auto _ : state) {
    hxai::kernels::ensemble_proba(model, rows, out, exec_of(state));
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(out.size()));
}
BENCHMARK(BM_EnsembleProba)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BestSplits(benchmark::State& state) {
  const auto& d = data();
  const std::size_t n = d.size(), f = hxai::kNumFeatures;
  static std::vector<double> columns, grad, hess;
  static std::vector<std::uint32_t> sorted;
  static std::vector<int> node_of;
  if (columns.empty()) {
    columns.resize(n * f);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < f; ++j) columns[j * n + i] = d.records[i].values[j];
    }
    sorted.resize(n * f);
    for (std::size_t j = 0; j < f; ++j) {
      auto* s = sorted.data() + j * n;
      std::iota(s, s + n, 0u);
      std::stable_sort(s, s + n, [&](std::uint32_t a, std::uint32_t b) {
        return columns[j * n + a] < columns[j * n + b];
      });
    }
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    grad.resize(n);
    hess.resize(n);
    node_of.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      grad[i] = g(rng);
      hess[i] = 0.25;
      node_of[i] = static_cast<int>(i % 4);
    }
  }
  hxai::kernels::SplitInput in;
  in.num_samples = n;
  in.num_features = f;
  in.columns = columns;
  in.sorted = sorted;
  in.grad = grad;
  in.hess = hess;
  in.node_of = node_of;
  in.num_nodes = 4;
  in.min_samples_leaf = 5;
  for (auto _ : state) {
    auto res = hxai::kernels::best_splits(in, exec_of(state));
    benchmark::DoNotOptimize(res.data());
  }
}
BENCHMARK(BM_BestSplits)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Distances(benchmark::State& state) {
  static const auto rows = row_major(data());
  static const auto profile =
      hxai::make_distance_profile(hxai::default_schema(), hxai::compute_stats(data()));
  const auto& q = data().records.front().values;
  std::vector<double> out(data().size());
  for (auto _ : state) {
    hxai::kernels::distances(q, rows, profile.scale, profile.is_boolean, hxai::kNumFeatures, out,
                             exec_of(state));
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(out.size()));
}
BENCHMARK(BM_Distances)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
