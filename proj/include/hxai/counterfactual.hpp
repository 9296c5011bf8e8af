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

// Example-based explanations: counterexamples (records the model assigns to
// a chosen alternate class) and similar cases (records it keeps in the
// hypothesis class), both as close to the query as the search can find.
//
// The search is a genetic algorithm over full records. Candidates are
// ranked lexicographically by (sparsity, proximity) where sparsity counts
// changed features and proximity is the range-normalised distance to the
// query. Counterexamples are additionally pulled back toward the query
// feature by feature until they sit on the decision boundary.

#ifndef HXAI_COUNTERFACTUAL_HPP_
#define HXAI_COUNTERFACTUAL_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hxai/classifier.hpp"
#include "hxai/tabular.hpp"

namespace hxai {

// Per-feature normalisation and search bounds derived from training stats.
// scale is the value range for integer/real features and 1 for booleans; a
// feature whose training range is zero gets scale 0, is left out of the
// distance and is never altered.
struct DistanceProfile {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> scale;
  std::vector<double> spread;  // training standard deviation
  // Candidate values are snapped to multiples of 1/lattice (0: unsnapped),
  // so synthesized records use the data's own recording precision.
  std::vector<double> lattice;
  std::vector<std::uint8_t> is_boolean;
  std::vector<std::uint8_t> is_integer;
  // Schema-mutable, in scope, and not listed as immutable.
  std::vector<std::uint8_t> mutable_mask;

  std::size_t size() const { return scale.size(); }
};

DistanceProfile make_distance_profile(const DatasetSchema& schema, const FeatureStats& stats,
                                      std::span<const std::string> immutable_features = {});

// Mean over all schema features of |a-b|/range (integer/real) or the 0/1
// mismatch indicator (boolean). Out-of-scope features contribute 0.
double distance(std::span<const double> a, std::span<const double> b,
                const DistanceProfile& profile);
// Throws Error(kSchemaMismatch) when either record has the wrong arity.
double distance(const Record& a, const Record& b, const DistanceProfile& profile);

// Returns true when a candidate is clinically admissible.
using DomainConstraint = std::function<bool(std::span<const double>)>;
// Rejects sex = male (1) together with pregnant = 1.
DomainConstraint sex_pregnancy_constraint(const DatasetSchema& schema);

inline constexpr int kMaxExplanations = 10;

struct CfConfig {
  ClassLabel target_class;
  int k = 3;  // in [0, kMaxExplanations]
  int population_size = 200;
  int generations = 50;
  double sparsity_pressure = 0.05;  // added to proximity per changed feature
  std::uint64_t seed = 0;
  std::vector<std::string> immutable_features;
  bool domain_constraints = true;

  // Throws Error(kInvalidCount) for k outside [0,10] and Error(kValidation)
  // for a non-positive population or a negative sparsity_pressure.
  void validate() const;
};

struct FeatureChange {
  std::size_t feature = 0;
  std::string name;
  double old_value = 0.0;
  double new_value = 0.0;
};

struct Counterexample {
  Record candidate;
  ClassLabel predicted_class;
  std::vector<FeatureChange> changed_features;  // schema order
  double proximity = 0.0;
  std::size_t sparsity = 0;
};

// Same shape; predicted_class equals the hypothesis.
using SimilarCase = Counterexample;

struct CfResult {
  std::vector<Counterexample> items;  // sorted by (sparsity, proximity)
  std::size_t requested = 0;
  // Set when the search produced fewer than `requested` valid candidates.
  bool budget_exhausted = false;
};

// Changes between query and candidate using the 1e-9 normalised threshold.
std::vector<FeatureChange> changed_features(const DatasetSchema& schema,
                                            std::span<const double> query,
                                            std::span<const double> candidate,
                                            const DistanceProfile& profile);

// Candidates predicted as config.target_class. A query already in the target
// class is allowed; the query itself is never returned.
CfResult generate_counterexamples(const Classifier& model, const DatasetSchema& schema,
                                  const Record& query, const CfConfig& config,
                                  const DistanceProfile& profile, const LabeledDataset& data);

// Candidates predicted as `config.target_class` (the hypothesis) that differ
// from the query. The population is seeded with the nearest dataset records
// the model places in the hypothesis class plus small perturbations of the
// query.
CfResult generate_similar_cases(const Classifier& model, const DatasetSchema& schema,
                                const Record& query, const CfConfig& config,
                                const DistanceProfile& profile, const LabeledDataset& data);
CfResult generate_similar_cases(const Classifier& model, const DatasetSchema& schema,
                                const Record& query, ClassLabel hypothesis, int k,
                                const DistanceProfile& profile, const LabeledDataset& data,
                                std::uint64_t seed);

// Greedy max-min selection: start from the best (sparsity, proximity)
// candidate, then repeatedly add the one farthest from the selected set
// (ties by lower proximity). Candidates at distance 0 from a selected one
// are never added.
std::vector<Counterexample> diversity_select(std::span<const Counterexample> candidates, int k,
                                             const DistanceProfile& profile);

// Exhaustive reference search over a per-feature grid. Features whose grid
// holds only the query value stay fixed. Returns nullopt when no grid point
// is valid ("no counterfactual in grid").
struct OracleResult {
  std::optional<Counterexample> best;
  std::size_t points_enumerated = 0;
};
OracleResult brute_force_oracle(const Classifier& model, const DatasetSchema& schema,
                                const Record& query, ClassLabel target_class,
                                const std::vector<std::vector<double>>& grid,
                                const DistanceProfile& profile,
                                const DomainConstraint& constraint = {});

}  // namespace hxai

#endif  // HXAI_COUNTERFACTUAL_HPP_
