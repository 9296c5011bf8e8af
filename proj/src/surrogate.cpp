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

#include "hxai/surrogate.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "hxai/error.hpp"
#include "hxai/rng.hpp"

namespace hxai {

std::vector<Record> perturb_around(const DatasetSchema& schema, const Record& record,
                                   const FeatureStats& stats, const PerturbationConfig& config) {
  const std::size_t d = schema.size();
  if (record.values.size() != d || stats.size() != d) {
    throw Error(ErrorCode::kSchemaMismatch, "perturb_around: arity does not match the schema");
  }
  const std::size_t n = std::max<std::size_t>(config.n_samples, 1);
  std::vector<Record> samples(n, record);
  for (std::size_t s = 0; s < n; ++s) samples[s].id = record.id + "#" + std::to_string(s);

  for (std::size_t j = 0; j < d; ++j) {
    const auto& spec = schema.feature(j);
    const auto& st = stats[j];
    Rng rng(derive_seed(config.seed, fnv1a64(spec.name)));
    if (spec.kind == FeatureKind::kBoolean) {
      std::bernoulli_distribution flip(config.boolean_flip_probability);
      for (std::size_t s = 1; s < n; ++s) {
        if (flip(rng)) samples[s].values[j] = 1.0 - record.values[j];
      }
      continue;
    }
    if (st.stddev <= 0.0) continue;  // zero-variance column stays constant
    std::normal_distribution<double> noise(record.values[j], st.stddev);
    for (std::size_t s = 1; s < n; ++s) {
      double v = std::clamp(noise(rng), st.min, st.max);
      if (spec.kind == FeatureKind::kInteger) v = std::round(v);
      samples[s].values[j] = v;
    }
  }
  return samples;
}

std::vector<double> kernel_weights(const Record& record, std::span<const Record> samples,
                                   const DistanceProfile& profile, double kernel_width) {
  std::vector<double> w(samples.size());
  const double inv = 1.0 / (kernel_width * kernel_width);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const double dist = distance(record, samples[s], profile);
    w[s] = std::exp(-dist * dist * inv);
  }
  return w;
}

ImportanceVector explain_importance(const Classifier& model, const DatasetSchema& schema,
                                    const Record& record, ClassLabel hypothesis,
                                    const FeatureStats& stats, const PerturbationConfig& config) {
  check_schema(model, schema);
  if (!(config.kernel_width > 0.0)) {
    throw Error(ErrorCode::kValidation, "kernel_width must be positive");
  }
  const std::size_t d = schema.size();
  const auto samples = perturb_around(schema, record, stats, config);
  const std::size_t n = samples.size();
  const auto profile = make_distance_profile(schema, stats);
  const auto w = kernel_weights(record, samples, profile, config.kernel_width);

  std::vector<double> rows(n * d);
  for (std::size_t s = 0; s < n; ++s) {
    std::copy(samples[s].values.begin(), samples[s].values.end(),
              rows.begin() + static_cast<std::ptrdiff_t>(s * d));
  }
  std::vector<Probabilities> probs(n);
  model.predict_proba_batch(rows, probs);
  const auto h = static_cast<std::size_t>(hypothesis.index());

  // Design: continuous columns standardised by training mean/std, booleans raw.
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  Eigen::VectorXd wv(static_cast<Eigen::Index>(n));
  for (std::size_t s = 0; s < n; ++s) {
    const auto r = static_cast<Eigen::Index>(s);
    for (std::size_t j = 0; j < d; ++j) {
      const auto c = static_cast<Eigen::Index>(j);
      const double v = samples[s].values[j];
      if (schema.feature(j).kind == FeatureKind::kBoolean) {
        x(r, c) = v;
      } else {
        x(r, c) = stats[j].stddev > 0.0 ? (v - stats[j].mean) / stats[j].stddev : 0.0;
      }
    }
    y(r) = probs[s][h];
    wv(r) = w[s];
  }

  const double wsum = wv.sum();
  const Eigen::RowVectorXd x_mean = (wv.asDiagonal() * x).colwise().sum() / wsum;
  const double y_mean = wv.dot(y) / wsum;
  const Eigen::MatrixXd xc = x.rowwise() - x_mean;
  const Eigen::VectorXd yc = y.array() - y_mean;

  ImportanceVector out;
  out.record_id = record.id;
  out.hypothesis = hypothesis;
  out.weights.assign(d, 0.0);
  out.intercept = y_mean;

  const double ss_tot = (wv.array() * yc.array().square()).sum();
  if (ss_tot <= 1e-12 * wsum) {
    out.quality = SurrogateQuality::kDegenerate;
    out.surrogate_r2 = 0.0;
    return out;
  }

  Eigen::MatrixXd gram = xc.transpose() * wv.asDiagonal() * xc;
  gram.diagonal().array() += config.ridge_alpha;
  const Eigen::VectorXd rhs = xc.transpose() * (wv.asDiagonal() * yc);
  const Eigen::VectorXd beta = gram.ldlt().solve(rhs);

  const Eigen::VectorXd resid = yc - xc * beta;
  const double ss_res = (wv.array() * resid.array().square()).sum();
  out.surrogate_r2 = 1.0 - ss_res / ss_tot;
  for (std::size_t j = 0; j < d; ++j) out.weights[j] = beta(static_cast<Eigen::Index>(j));
  out.intercept = y_mean - x_mean.dot(beta);
  return out;
}

}  // namespace hxai
