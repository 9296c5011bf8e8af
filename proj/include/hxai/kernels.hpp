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

// Data-parallel inner loops. Every kernel has a serial reference path that
// the OpenMP path must match bit for bit; tests compare the two and
// bench/ times them.

#ifndef HXAI_KERNELS_HPP_
#define HXAI_KERNELS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "hxai/classifier.hpp"

namespace hxai {
class GbdtModel;
}

namespace hxai::kernels {

enum class Exec { kSerial, kParallel };

// Softmax probabilities of a tree ensemble for each row of a row-major
// matrix (parallel over rows).
void ensemble_proba(const GbdtModel& model, std::span<const double> rows,
                    std::span<Probabilities> out, Exec exec);

// Generic batch prediction through the Classifier interface.
void classifier_proba(const Classifier& model, std::span<const double> rows,
                      std::span<Probabilities> out, Exec exec);

// Inputs to one level of exact greedy split search.
struct SplitInput {
  std::size_t num_samples = 0;
  std::size_t num_features = 0;
  // Feature-major column storage: columns[f * num_samples + i].
  std::span<const double> columns;
  // sorted[f * num_samples + r] is the r-th sample by ascending feature f.
  std::span<const std::uint32_t> sorted;
  std::span<const double> grad;
  std::span<const double> hess;
  // Level-local node of each sample, or -1 when the sample is inactive.
  std::span<const int> node_of;
  std::size_t num_nodes = 0;
  double lambda = 1.0;
  std::size_t min_samples_leaf = 1;
};

struct SplitResult {
  int feature = -1;  // -1 when no admissible split improves the objective
  double threshold = 0.0;
  double gain = 0.0;
};

// Best split per node. Ties in gain resolve toward the lower feature index,
// then toward the lower threshold.
std::vector<SplitResult> best_splits(const SplitInput& in, Exec exec);

// Range-normalised distance from `query` to every row (parallel over rows).
// scale[j] == 0 excludes feature j; booleans use scale 1 with a 0/1 indicator.
void distances(std::span<const double> query, std::span<const double> rows,
               std::span<const double> scale, std::span<const std::uint8_t> is_boolean,
               std::size_t total_features, std::span<double> out, Exec exec);

}  // namespace hxai::kernels

#endif  // HXAI_KERNELS_HPP_
