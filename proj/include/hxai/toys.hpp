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


// Small enumerable counterfactual problems with known optima, and the check
// that compares the genetic search against exhaustive enumeration.

#ifndef HXAI_TOYS_HPP_
#define HXAI_TOYS_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hxai/classifier.hpp"
#include "hxai/counterfactual.hpp"
#include "hxai/tabular.hpp"

namespace hxai {

// Seeds every seed-robust check iterates over.
inline constexpr std::array<std::uint64_t, 5> kSeedSuite{11, 23, 37, 41, 53};

// Only the features with a non-trivial grid may change; the search bounds
// equal the grid bounds so both searches see the same box.
struct ToyProblem {
  std::string name;
  std::string description;
  std::shared_ptr<const Classifier> model;
  Record query;
  ClassLabel target;
  std::vector<std::vector<double>> grid;  // schema order
  FeatureStats stats;
  DistanceProfile profile;
  LabeledDataset data;  // seeding pool for the search
};

// The five bundled problems: threshold, sum, box, boolean-or, trained.
std::vector<ToyProblem> bundled_toys();
// A problem whose feasible set is empty.
ToyProblem empty_toy();

inline constexpr double kOracleRatioBound = 1.10;

struct OracleCheck {
  std::string toy;
  std::uint64_t seed = 0;
  bool feasible = false;  // the oracle found a counterexample
  double oracle_proximity = 0.0;
  std::size_t oracle_sparsity = 0;
  std::optional<double> search_proximity;  // nullopt: search returned nothing
  std::size_t search_sparsity = 0;
  // search / oracle proximity; +inf when the search came back empty on a
  // feasible problem.
  double ratio = 0.0;
  bool pass = false;
};

OracleCheck run_oracle_check(const ToyProblem& toy, std::uint64_t seed, int generations = 50);

}  // namespace hxai

#endif  // HXAI_TOYS_HPP_
