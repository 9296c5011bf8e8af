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

// Signed local feature importance from a proximity-weighted linear
// surrogate fitted to the model's probability for one class.

#ifndef HXAI_SURROGATE_HPP_
#define HXAI_SURROGATE_HPP_

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hxai/classifier.hpp"
#include "hxai/counterfactual.hpp"
#include "hxai/tabular.hpp"

namespace hxai {

struct PerturbationConfig {
  std::size_t n_samples = 5000;
  // Measured in units of hxai::distance.
  double kernel_width = 0.75 * std::sqrt(static_cast<double>(kNumFeatures));
  std::uint64_t seed = 0;
  double boolean_flip_probability = 0.15;
  double ridge_alpha = 1.0;
};

enum class SurrogateQuality {
  kOk,
  kDegenerate,  // target (nearly) constant over the perturbation set
};

struct ImportanceVector {
  std::string record_id;
  ClassLabel hypothesis;
  // One weight per schema feature, schema order. Positive supports the
  // hypothesis class. Continuous weights are per training standard
  // deviation; boolean weights are per 0->1 flip.
  std::vector<double> weights;
  double intercept = 0.0;
  double surrogate_r2 = 0.0;  // weighted R^2 on the perturbation set
  SurrogateQuality quality = SurrogateQuality::kOk;
};

// Sample 0 is the record itself. Each continuous feature draws from
// N(value, training std) clipped to the training range (integers rounded),
// each boolean flips with boolean_flip_probability. Every feature owns its
// own random stream keyed by (seed, feature name), so reordering the schema
// reorders the samples' columns and nothing else.
std::vector<Record> perturb_around(const DatasetSchema& schema, const Record& record,
                                   const FeatureStats& stats, const PerturbationConfig& config);

// exp(-d^2 / width^2) with d = distance(record, sample).
std::vector<double> kernel_weights(const Record& record, std::span<const Record> samples,
                                   const DistanceProfile& profile, double kernel_width);

ImportanceVector explain_importance(const Classifier& model, const DatasetSchema& schema,
                                    const Record& record, ClassLabel hypothesis,
                                    const FeatureStats& stats, const PerturbationConfig& config);

}  // namespace hxai

#endif  // HXAI_SURROGATE_HPP_
