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

#ifndef HXAI_CLASSIFIER_HPP_
#define HXAI_CLASSIFIER_HPP_

#include <array>
#include <functional>
#include <span>
#include <string>
#include <utility>

#include "hxai/tabular.hpp"

namespace hxai {

using Probabilities = std::array<double, kNumClasses>;

// Ties resolve toward the lowest class index.
ClassLabel argmax_class(const Probabilities& p);

// The black box under explanation. Explainers only ever call predict_proba,
// so anything with a 3-class probability output can be explained.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual std::size_t num_features() const = 0;
  virtual const std::string& schema_fingerprint() const = 0;
  virtual Probabilities predict_proba(std::span<const double> values) const = 0;

  // rows is row-major with num_features() columns; out has one entry per row.
  virtual void predict_proba_batch(std::span<const double> rows,
                                   std::span<Probabilities> out) const;
};

// Throws Error(kSchemaMismatch) unless the classifier was built for `schema`.
void check_schema(const Classifier& model, const DatasetSchema& schema);

// Checked single-record entry points.
Probabilities predict_proba(const Classifier& model, const DatasetSchema& schema,
                            const Record& record);
ClassLabel predict_class(const Classifier& model, const DatasetSchema& schema,
                         const Record& record);

// Adapts a plain function. Used for synthetic oracles and toy problems.
class FunctionClassifier final : public Classifier {
 public:
  using Fn = std::function<Probabilities(std::span<const double>)>;

  FunctionClassifier(const DatasetSchema& schema, Fn fn)
      : fingerprint_(schema.fingerprint()), num_features_(schema.size()), fn_(std::move(fn)) {}

  std::size_t num_features() const override { return num_features_; }
  const std::string& schema_fingerprint() const override { return fingerprint_; }
  Probabilities predict_proba(std::span<const double> values) const override {
    return fn_(values);
  }

 private:
  std::string fingerprint_;
  std::size_t num_features_;
  Fn fn_;
};

}  // namespace hxai

#endif  // HXAI_CLASSIFIER_HPP_
