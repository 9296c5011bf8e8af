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

#include "hxai/kernels.hpp"

#include <cmath>
#include <limits>

#include <omp.h>

#include "hxai/gbdt.hpp"

namespace hxai::kernels {

void ensemble_proba(const GbdtModel& model, std::span<const double> rows,
                    std::span<Probabilities> out, Exec exec) {
  const std::size_t d = model.num_features();
  const auto n = static_cast<std::int64_t>(out.size());
  if (exec == Exec::kSerial) {
    for (std::int64_t r = 0; r < n; ++r) {
      out[static_cast<std::size_t>(r)] =
          softmax(model.raw_scores(rows.subspan(static_cast<std::size_t>(r) * d, d)));
    }
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < n; ++r) {
    out[static_cast<std::size_t>(r)] =
        softmax(model.raw_scores(rows.subspan(static_cast<std::size_t>(r) * d, d)));
  }
}

void classifier_proba(const Classifier& model, std::span<const double> rows,
                      std::span<Probabilities> out, Exec exec) {
  const std::size_t d = model.num_features();
  const auto n = static_cast<std::int64_t>(out.size());
  if (exec == Exec::kSerial) {
    for (std::int64_t r = 0; r < n; ++r) {
      out[static_cast<std::size_t>(r)] =
          model.predict_proba(rows.subspan(static_cast<std::size_t>(r) * d, d));
    }
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < n; ++r) {
    out[static_cast<std::size_t>(r)] =
        model.predict_proba(rows.subspan(static_cast<std::size_t>(r) * d, d));
  }
}

namespace {

struct NodeTotals {
  double grad = 0.0;
  double hess = 0.0;
  std::size_t count = 0;
};

double leaf_score(double g, double h, double lambda) { return g * g / (h + lambda); }

// Best split of every node along one feature. Pure function of its inputs, so
// serial and parallel drivers produce identical per-feature results.
void scan_feature(const SplitInput& in, std::size_t f, const std::vector<NodeTotals>& totals,
                  std::span<SplitResult> best) {
  const std::size_t n = in.num_samples;
  const auto column = in.columns.subspan(f * n, n);
  const auto order = in.sorted.subspan(f * n, n);

  std::vector<NodeTotals> left(in.num_nodes);
  std::vector<double> last(in.num_nodes, std::numeric_limits<double>::quiet_NaN());

  for (std::uint32_t i : order) {
    const int node = in.node_of[i];
    if (node < 0) continue;
    const auto k = static_cast<std::size_t>(node);
    const double v = column[i];
    auto& l = left[k];
    if (l.count > 0 && v != last[k]) {
      const auto& t = totals[k];
      const std::size_t right_count = t.count - l.count;
      if (l.count >= in.min_samples_leaf && right_count >= in.min_samples_leaf) {
        const double gain =
            0.5 * (leaf_score(l.grad, l.hess, in.lambda) +
                   leaf_score(t.grad - l.grad, t.hess - l.hess, in.lambda) -
                   leaf_score(t.grad, t.hess, in.lambda));
        if (gain > best[k].gain) {
          double threshold = 0.5 * (last[k] + v);
          if (!(threshold > last[k])) threshold = v;
          best[k] = {static_cast<int>(f), threshold, gain};
        }
      }
    }
    l.grad += in.grad[i];
    l.hess += in.hess[i];
    ++l.count;
    last[k] = v;
  }
}

}  // namespace

std::vector<SplitResult> best_splits(const SplitInput& in, Exec exec) {
  std::vector<NodeTotals> totals(in.num_nodes);
  for (std::size_t i = 0; i < in.num_samples; ++i) {
    const int node = in.node_of[i];
    if (node < 0) continue;
    auto& t = totals[static_cast<std::size_t>(node)];
    t.grad += in.grad[i];
    t.hess += in.hess[i];
    ++t.count;
  }

  // per_feature[f * num_nodes + node]
  std::vector<SplitResult> per_feature(in.num_features * in.num_nodes);
  const auto nf = static_cast<std::int64_t>(in.num_features);
  if (exec == Exec::kSerial) {
    for (std::int64_t f = 0; f < nf; ++f) {
      const auto fu = static_cast<std::size_t>(f);
      scan_feature(in, fu, totals,
                   std::span(per_feature).subspan(fu * in.num_nodes, in.num_nodes));
    }
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t f = 0; f < nf; ++f) {
      const auto fu = static_cast<std::size_t>(f);
      scan_feature(in, fu, totals,
                   std::span(per_feature).subspan(fu * in.num_nodes, in.num_nodes));
    }
  }

  std::vector<SplitResult> best(in.num_nodes);
  for (std::size_t f = 0; f < in.num_features; ++f) {
    for (std::size_t k = 0; k < in.num_nodes; ++k) {
      const auto& cand = per_feature[f * in.num_nodes + k];
      if (cand.feature >= 0 && cand.gain > best[k].gain) best[k] = cand;
    }
  }
  return best;
}

void distances(std::span<const double> query, std::span<const double> rows,
               std::span<const double> scale, std::span<const std::uint8_t> is_boolean,
               std::size_t total_features, std::span<double> out, Exec exec) {
  const std::size_t d = query.size();
  const double denom = static_cast<double>(total_features);
  const auto n = static_cast<std::int64_t>(out.size());
  auto one = [&](std::int64_t r) {
    const auto row = rows.subspan(static_cast<std::size_t>(r) * d, d);
    double sum = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      if (scale[j] <= 0.0) continue;
      if (is_boolean[j]) {
        sum += row[j] != query[j] ? 1.0 : 0.0;
      } else {
        sum += std::abs(row[j] - query[j]) / scale[j];
      }
    }
    out[static_cast<std::size_t>(r)] = sum / denom;
  };
  if (exec == Exec::kSerial) {
    for (std::int64_t r = 0; r < n; ++r) one(r);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < n; ++r) one(r);
}

}  // namespace hxai::kernels
