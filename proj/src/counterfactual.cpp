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

#include "hxai/counterfactual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "hxai/error.hpp"
#include "hxai/kernels.hpp"
#include "hxai/rng.hpp"

namespace hxai {

namespace {

constexpr double kChangeThreshold = 1e-9;
// Pool candidates closer than this to a better one are treated as repeats.
constexpr double kDuplicateDistance = 1e-4;
constexpr double kInvalidPenalty = 1e3;
// Nearest target-class dataset rows that always reach the refinement step.
constexpr std::size_t kRowSeeds = 20;

bool differs(double a, double b, std::size_t j, const DistanceProfile& p) {
  if (p.scale[j] <= 0.0) return false;
  if (p.is_boolean[j]) return a != b;
  return std::abs(a - b) / p.scale[j] > kChangeThreshold;
}

std::size_t count_changes(std::span<const double> q, std::span<const double> x,
                          const DistanceProfile& p) {
  std::size_t n = 0;
  for (std::size_t j = 0; j < q.size(); ++j) n += differs(q[j], x[j], j, p) ? 1 : 0;
  return n;
}

}  // namespace

DistanceProfile make_distance_profile(const DatasetSchema& schema, const FeatureStats& stats,
                                      std::span<const std::string> immutable_features) {
  if (stats.size() != schema.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "feature stats do not match the schema");
  }
  DistanceProfile p;
  const std::size_t d = schema.size();
  p.lower.resize(d);
  p.upper.resize(d);
  p.scale.resize(d);
  p.is_boolean.resize(d);
  p.is_integer.resize(d);
  p.mutable_mask.resize(d);
  p.spread.resize(d);
  p.lattice.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    const auto& spec = schema.feature(j);
    p.lower[j] = stats[j].min;
    p.spread[j] = stats[j].stddev;
    p.upper[j] = stats[j].max;
    p.is_boolean[j] = spec.kind == FeatureKind::kBoolean;
    p.is_integer[j] = spec.kind == FeatureKind::kInteger;
    const double res = p.is_integer[j] ? 1.0 : stats[j].resolution;
    p.lattice[j] = p.is_boolean[j] || res <= 0.0 ? 0.0 : std::round(1.0 / res);
    const double range = stats[j].range();
    p.scale[j] = range > 0.0 ? (p.is_boolean[j] ? 1.0 : range) : 0.0;
    const bool frozen = std::find(immutable_features.begin(), immutable_features.end(),
                                  spec.name) != immutable_features.end();
    p.mutable_mask[j] = spec.mutable_ && p.scale[j] > 0.0 && !frozen;
  }
  return p;
}

double distance(std::span<const double> a, std::span<const double> b,
                const DistanceProfile& p) {
  double sum = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p.scale[j] <= 0.0) continue;
    sum += p.is_boolean[j] ? (a[j] != b[j] ? 1.0 : 0.0) : std::abs(a[j] - b[j]) / p.scale[j];
  }
  return sum / static_cast<double>(p.size());
}

double distance(const Record& a, const Record& b, const DistanceProfile& profile) {
  if (a.values.size() != profile.size() || b.values.size() != profile.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "distance: record arity does not match the schema");
  }
  return distance(a.values, b.values, profile);
}

DomainConstraint sex_pregnancy_constraint(const DatasetSchema& schema) {
  const auto sex = schema.find("sex");
  const auto pregnant = schema.find("pregnant");
  if (!sex || !pregnant) return {};
  return [s = *sex, p = *pregnant](std::span<const double> x) {
    return !(x[s] == 1.0 && x[p] == 1.0);
  };
}

void CfConfig::validate() const {
  if (k < 0 || k > kMaxExplanations) {
    throw Error(ErrorCode::kInvalidCount,
                "explanation count must lie in [0,10], got " + std::to_string(k));
  }
  if (population_size < 1) throw Error(ErrorCode::kValidation, "population_size must be positive");
  if (generations < 0) throw Error(ErrorCode::kValidation, "generations must be non-negative");
  if (!(sparsity_pressure >= 0.0)) {
    throw Error(ErrorCode::kValidation, "sparsity_pressure must be non-negative");
  }
}

std::vector<FeatureChange> changed_features(const DatasetSchema& schema,
                                            std::span<const double> query,
                                            std::span<const double> candidate,
                                            const DistanceProfile& profile) {
  std::vector<FeatureChange> out;
  for (std::size_t j = 0; j < query.size(); ++j) {
    if (differs(query[j], candidate[j], j, profile)) {
      out.push_back({j, schema.feature(j).name, query[j], candidate[j]});
    }
  }
  return out;
}

std::vector<Counterexample> diversity_select(std::span<const Counterexample> candidates, int k,
                                             const DistanceProfile& profile) {
  std::vector<Counterexample> selected;
  if (k <= 0 || candidates.empty()) return selected;

  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = candidates[a];
    const auto& y = candidates[b];
    return std::tie(x.sparsity, x.proximity) < std::tie(y.sparsity, y.proximity);
  });

  std::vector<double> min_dist(candidates.size(), std::numeric_limits<double>::infinity());
  std::vector<std::uint8_t> taken(candidates.size(), 0);
  std::size_t next = order.front();
  while (true) {
    taken[next] = 1;
    selected.push_back(candidates[next]);
    if (selected.size() >= static_cast<std::size_t>(k)) break;

    const auto& chosen = candidates[next].candidate.values;
    double best = 0.0;
    std::optional<std::size_t> pick;
    for (std::size_t i : order) {
      if (taken[i]) continue;
      min_dist[i] = std::min(min_dist[i], distance(candidates[i].candidate.values, chosen, profile));
      if (min_dist[i] <= 0.0) continue;
      if (!pick || min_dist[i] > best ||
          (min_dist[i] == best && candidates[i].proximity < candidates[*pick].proximity)) {
        best = min_dist[i];
        pick = i;
      }
    }
    if (!pick) break;
    next = *pick;
  }
  return selected;
}

namespace {

enum class Mode { kCounterexample, kSimilar };

struct Individual {
  std::vector<double> x;
  double fitness = 0.0;
  bool valid = false;
};

class Search {
 public:
  Search(const Classifier& model, const DatasetSchema& schema, const Record& query,
         const CfConfig& config, const DistanceProfile& profile, const LabeledDataset& data,
         Mode mode)
      : model_(model),
        schema_(schema),
        query_(query),
        config_(config),
        profile_(profile),
        data_(data),
        mode_(mode),
        rng_(derive_seed(config.seed, (mode == Mode::kSimilar ? 0x5100 : 0xcf00) +
                                          static_cast<std::uint64_t>(config.target_class.index()))),
        target_(static_cast<std::size_t>(config.target_class.index())) {
    for (std::size_t j = 0; j < profile_.size(); ++j) {
      bool frozen = !profile_.mutable_mask[j];
      for (const auto& name : config_.immutable_features) {
        frozen = frozen || schema_.feature(j).name == name;
      }
      if (!frozen) mutable_.push_back(j);
    }
    if (config_.domain_constraints) constraint_ = sex_pregnancy_constraint(schema_);
  }

  CfResult run() {
    CfResult result;
    result.requested = static_cast<std::size_t>(config_.k);
    if (config_.k == 0) return result;
    if (config_.generations == 0 || mutable_.empty()) {
      result.budget_exhausted = true;
      return result;
    }

    auto population = initial_population();
    evaluate(population);
    archive(population);
    const std::size_t p = static_cast<std::size_t>(config_.population_size);
    const std::size_t elites = std::max<std::size_t>(1, p / 10);

    for (int g = 0; g < config_.generations; ++g) {
      sort_by_fitness(population);
      std::vector<Individual> next(population.begin(),
                                   population.begin() + static_cast<std::ptrdiff_t>(
                                                            std::min(elites, population.size())));
      while (next.size() < p) {
        const auto& a = tournament(population);
        const auto& b = tournament(population);
        Individual child;
        child.x = crossover(a.x, b.x);
        mutate(child.x);
        snap(child.x);
        next.push_back(std::move(child));
      }
      std::vector<Individual> fresh(next.begin() + static_cast<std::ptrdiff_t>(
                                                       std::min(elites, next.size())),
                                    next.end());
      evaluate(fresh);
      archive(fresh);
      std::copy(fresh.begin(), fresh.end(),
                next.begin() + static_cast<std::ptrdiff_t>(std::min(elites, next.size())));
      population = std::move(next);
    }

    return finish();
  }

 private:
  double proximity(std::span<const double> x) const { return distance(query_.values, x, profile_); }

  bool admissible(std::span<const double> x) const { return !constraint_ || constraint_(x); }

  bool is_valid(std::span<const double> x, const Probabilities& prob) const {
    return argmax_class(prob).index() == static_cast<int>(target_) && admissible(x) &&
           count_changes(query_.values, x, profile_) > 0;
  }

  bool valid_point(std::span<const double> x) const {
    return is_valid(x, model_.predict_proba(x));
  }

  void snap(std::vector<double>& x) const {
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (std::find(mutable_.begin(), mutable_.end(), j) == mutable_.end()) {
        x[j] = query_.values[j];
        continue;
      }
      if (profile_.is_boolean[j]) {
        x[j] = x[j] >= 0.5 ? 1.0 : 0.0;
        continue;
      }
      x[j] = on_lattice(j, std::clamp(x[j], profile_.lower[j], profile_.upper[j]), 0);
    }
  }

  // Nearest lattice value (dir 0) or the next one up (+1) / down (-1).
  double on_lattice(std::size_t j, double v, int dir) const {
    const double m = profile_.lattice[j];
    if (m <= 0.0) return v;
    const double x = v * m;
    const double n = dir > 0 ? std::ceil(x - 1e-9) : dir < 0 ? std::floor(x + 1e-9) : std::round(x);
    return n / m;
  }

  void evaluate(std::vector<Individual>& pop) const {
    const std::size_t d = profile_.size();
    std::vector<double> rows(pop.size() * d);
    for (std::size_t i = 0; i < pop.size(); ++i) {
      std::copy(pop[i].x.begin(), pop[i].x.end(), rows.begin() + static_cast<std::ptrdiff_t>(i * d));
    }
    std::vector<Probabilities> probs(pop.size());
    model_.predict_proba_batch(rows, probs);
    for (std::size_t i = 0; i < pop.size(); ++i) {
      auto& ind = pop[i];
      ind.valid = is_valid(ind.x, probs[i]);
      const double prox = proximity(ind.x);
      const auto sparsity = static_cast<double>(count_changes(query_.values, ind.x, profile_));
      ind.fitness = ind.valid ? prox + config_.sparsity_pressure * sparsity
                              : kInvalidPenalty + (1.0 - probs[i][target_]) + 1e-3 * prox;
    }
  }

  void archive(const std::vector<Individual>& pop) {
    for (const auto& ind : pop) {
      if (ind.valid) archive_.emplace(ind.x, ind.fitness);
    }
  }

  static void sort_by_fitness(std::vector<Individual>& pop) {
    std::stable_sort(pop.begin(), pop.end(),
                     [](const Individual& a, const Individual& b) { return a.fitness < b.fitness; });
  }

  const Individual& tournament(const std::vector<Individual>& pop) {
    std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
    const Individual* best = &pop[pick(rng_)];
    for (int t = 1; t < 3; ++t) {
      const Individual* other = &pop[pick(rng_)];
      if (other->fitness < best->fitness) best = other;
    }
    return *best;
  }

  std::vector<double> crossover(const std::vector<double>& a, const std::vector<double>& b) {
    std::bernoulli_distribution coin(0.5);
    std::vector<double> child = a;
    for (auto j : mutable_) {
      if (coin(rng_)) child[j] = b[j];
    }
    return child;
  }

  double resample(std::size_t j) {
    if (profile_.is_boolean[j]) return std::bernoulli_distribution(0.5)(rng_) ? 1.0 : 0.0;
    return std::uniform_real_distribution<double>(profile_.lower[j], profile_.upper[j])(rng_);
  }

  double local_step(std::size_t j, double value) {
    if (profile_.is_boolean[j]) return 1.0 - value;
    const double sigma = 0.25 * (profile_.spread[j] > 0.0 ? profile_.spread[j] : profile_.scale[j]);
    return value + std::normal_distribution<double>(0.0, sigma)(rng_);
  }

  void mutate(std::vector<double>& x) {
    const double rate = 1.0 / static_cast<double>(mutable_.size());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto j : mutable_) {
      if (u(rng_) < rate) {
        x[j] = mode_ == Mode::kSimilar ? local_step(j, x[j]) : resample(j);
      }
      if (x[j] != query_.values[j] && u(rng_) < 0.1) x[j] = query_.values[j];
    }
  }

  std::vector<Individual> initial_population() {
    const std::size_t p = static_cast<std::size_t>(config_.population_size);
    std::vector<Individual> pop;

    if (mode_ == Mode::kCounterexample) {
      // Nearest valid point along each single feature, both directions.
      constexpr int kSteps = 32;
      for (auto j : mutable_) {
        for (double bound : {profile_.upper[j], profile_.lower[j]}) {
          if (bound == query_.values[j]) continue;
          const int steps = profile_.is_boolean[j] ? 1 : kSteps;
          std::vector<Individual> line(static_cast<std::size_t>(steps));
          for (int s = 1; s <= steps; ++s) {
            auto& ind = line[static_cast<std::size_t>(s - 1)];
            ind.x = query_.values;
            ind.x[j] = query_.values[j] + (bound - query_.values[j]) * s / steps;
            snap(ind.x);
          }
          evaluate(line);
          for (auto& ind : line) {
            if (ind.valid) {
              pop.push_back(std::move(ind));
              break;
            }
          }
        }
      }
    }

    // Dataset records the model places in the target class, nearest first.
    if (!data_.empty()) {
      const std::size_t d = profile_.size();
      std::vector<double> rows(data_.size() * d);
      for (std::size_t i = 0; i < data_.size(); ++i) {
        auto x = data_.records[i].values;
        snap(x);
        std::copy(x.begin(), x.end(), rows.begin() + static_cast<std::ptrdiff_t>(i * d));
      }
      std::vector<Probabilities> probs(data_.size());
      model_.predict_proba_batch(rows, probs);
      std::vector<double> dist(data_.size());
      kernels::distances(query_.values, rows, profile_.scale, profile_.is_boolean, d, dist,
                         kernels::Exec::kParallel);
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < data_.size(); ++i) {
        if (argmax_class(probs[i]).index() == static_cast<int>(target_) && dist[i] > 0.0) {
          idx.push_back(i);
        }
      }
      std::stable_sort(idx.begin(), idx.end(),
                       [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
      const std::size_t want = std::min(idx.size(), p / 2);
      for (std::size_t r = 0; r < want && pop.size() < p; ++r) {
        Individual ind;
        ind.x.assign(rows.begin() + static_cast<std::ptrdiff_t>(idx[r] * d),
                     rows.begin() + static_cast<std::ptrdiff_t>((idx[r] + 1) * d));
        if (row_seeds_.size() < kRowSeeds) row_seeds_.push_back(ind.x);
        pop.push_back(std::move(ind));
      }
    }

    // Perturbed copies of the query fill the rest.
    std::uniform_int_distribution<std::size_t> how_many(1, std::min<std::size_t>(3, mutable_.size()));
    std::uniform_int_distribution<std::size_t> which(0, mutable_.size() - 1);
    std::size_t attempts = 0;
    while (pop.size() < p && attempts++ < 20 * p) {
      Individual ind;
      ind.x = query_.values;
      const std::size_t m = how_many(rng_);
      for (std::size_t t = 0; t < m; ++t) {
        const auto j = mutable_[which(rng_)];
        if (mode_ == Mode::kSimilar) {
          if (profile_.is_boolean[j]) continue;
          ind.x[j] = local_step(j, ind.x[j]);
        } else {
          ind.x[j] = resample(j);
        }
      }
      snap(ind.x);
      pop.push_back(std::move(ind));
    }
    return pop;
  }

  // Pulls a valid counterexample back toward the query until no single
  // change can be undone or shortened. With reversions_first the search
  // tries dropping whole features before shortening any, which favours the
  // sparsest point; otherwise every change is first shortened against the
  // others, which keeps jointly necessary combinations intact.
  std::vector<double> refine(std::vector<double> c, bool reversions_first) const {
    const auto& q = query_.values;
    auto revert_all = [&]() {
      bool moved = false;
      for (auto j : mutable_) {
        if (!differs(q[j], c[j], j, profile_)) continue;
        auto y = c;
        y[j] = q[j];
        if (valid_point(y)) {
          c = std::move(y);
          moved = true;
        }
      }
      return moved;
    };
    auto shorten_all = [&]() {
      bool moved = false;
      for (auto j : mutable_) {
        if (profile_.is_boolean[j] || !differs(q[j], c[j], j, profile_)) continue;
        for (int hop = 0; hop < 24; ++hop) {
          const double before = c[j];
          bisect(c, j);
          auto half = c;
          half[j] = on_lattice(j, q[j] + 0.5 * (c[j] - q[j]), c[j] > q[j] ? 1 : -1);
          if (half[j] != c[j] && differs(q[j], half[j], j, profile_) && valid_point(half)) {
            c = std::move(half);
          }
          if (c[j] == before) break;
          moved = true;
        }
      }
      return moved;
    };
    for (int pass = 0; pass < 4; ++pass) {
      bool moved = false;
      if (reversions_first) {
        moved = revert_all();
        moved = shorten_all() || moved;
      } else {
        moved = shorten_all();
        moved = revert_all() || moved;
      }
      if (!moved) break;
    }
    return c;
  }

  // Smallest t in (0,1] (to tolerance) with q + t*(c-q) valid along feature j.
  // Values are snapped to the lattice away from the query, and c[j] is valid
  // on entry, so hi always maps to a tested valid value.
  void bisect(std::vector<double>& c, std::size_t j) const {
    const double q = query_.values[j];
    const double far = c[j];
    const double span = std::abs(far - q);
    const int dir = far > q ? 1 : -1;
    const double step = profile_.lattice[j] > 0.0 ? 1.0 / profile_.lattice[j] : 0.0;
    auto value_at = [&](double t) {
      return t >= 1.0 ? far : on_lattice(j, q + t * (far - q), dir);
    };
    double lo = 0.0;
    double hi = 1.0;
    auto y = c;
    for (int it = 0; it < 48; ++it) {
      if ((hi - lo) * span / profile_.scale[j] < 1e-7) break;
      if (step > 0.0 && (hi - lo) * span < 0.5 * step) break;
      const double mid = 0.5 * (lo + hi);
      y[j] = value_at(mid);
      (valid_point(y) ? hi : lo) = mid;
    }
    c[j] = value_at(hi);
  }

  Counterexample make_item(const std::vector<double>& x, std::size_t ordinal) const {
    Counterexample item;
    item.candidate.id = query_.id + (mode_ == Mode::kSimilar ? "-sc" : "-cf" + std::to_string(target_)) +
                        "-" + std::to_string(ordinal);
    item.candidate.values = x;
    item.predicted_class = argmax_class(model_.predict_proba(x));
    item.changed_features = changed_features(schema_, query_.values, x, profile_);
    item.proximity = proximity(x);
    item.sparsity = item.changed_features.size();
    return item;
  }

  CfResult finish() {
    CfResult result;
    result.requested = static_cast<std::size_t>(config_.k);

    std::vector<std::pair<double, const std::vector<double>*>> ranked;
    ranked.reserve(archive_.size());
    for (const auto& [x, fitness] : archive_) ranked.emplace_back(fitness, &x);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    const std::size_t cap =
        std::min(ranked.size(), std::max<std::size_t>(50, 10 * static_cast<std::size_t>(config_.k)));

    // Best-first, but at most kPerSignature points per changed-feature set so
    // one cheap direction cannot crowd out the alternatives.
    constexpr std::size_t kPerSignature = 4;
    std::map<std::vector<std::uint8_t>, std::size_t> per_signature;
    std::vector<std::vector<double>> pool;
    for (const auto& [fitness, x] : ranked) {
      if (pool.size() >= cap) break;
      std::vector<std::uint8_t> sig(x->size());
      for (std::size_t j = 0; j < sig.size(); ++j) sig[j] = differs(query_.values[j], (*x)[j], j, profile_);
      if (++per_signature[sig] > kPerSignature) continue;
      pool.push_back(*x);
    }
    // Real records of the target class reach it through feature
    // combinations the evolved population rarely keeps; refine them too.
    for (const auto& x : row_seeds_) {
      if (mode_ == Mode::kCounterexample && valid_point(x)) pool.push_back(x);
    }
    const std::size_t keep = pool.size();
    if (mode_ == Mode::kCounterexample) {
      // Each archived point yields a fully reduced variant and one that keeps
      // its feature set; the latter preserves multi-feature alternatives
      // that reduction would collapse onto the same single-feature point.
      pool.resize(2 * keep);
      const auto n = static_cast<std::int64_t>(keep);
#pragma omp parallel for schedule(dynamic, 1)
      for (std::int64_t i = 0; i < n; ++i) {
        const auto u = static_cast<std::size_t>(i);
        pool[keep + u] = refine(pool[u], false);
        pool[u] = refine(pool[u], true);
      }
    }

    std::vector<Counterexample> items;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (!valid_point(pool[i])) continue;  // never trust the search
      items.push_back(make_item(pool[i], i));
    }
    std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
      return std::tie(a.sparsity, a.proximity) < std::tie(b.sparsity, b.proximity);
    });
    std::vector<Counterexample> unique;
    for (auto& item : items) {
      bool repeat = false;
      for (const auto& u : unique) {
        repeat = repeat || distance(u.candidate.values, item.candidate.values, profile_) <
                               kDuplicateDistance;
      }
      if (!repeat) unique.push_back(std::move(item));
    }
    const std::size_t pool_size =
        std::min(unique.size(), std::max<std::size_t>(10, 3 * static_cast<std::size_t>(config_.k)));
    unique.resize(pool_size);

    result.items = diversity_select(unique, config_.k, profile_);
    std::stable_sort(result.items.begin(), result.items.end(), [](const auto& a, const auto& b) {
      return std::tie(a.sparsity, a.proximity) < std::tie(b.sparsity, b.proximity);
    });
    for (std::size_t i = 0; i < result.items.size(); ++i) {
      result.items[i].candidate.id =
          query_.id + (mode_ == Mode::kSimilar ? "-sc" : "-cf" + std::to_string(target_)) + "-" +
          std::to_string(i + 1);
    }
    result.budget_exhausted = result.items.size() < result.requested;
    return result;
  }

  const Classifier& model_;
  const DatasetSchema& schema_;
  const Record& query_;
  const CfConfig& config_;
  const DistanceProfile& profile_;
  const LabeledDataset& data_;
  Mode mode_;
  Rng rng_;
  std::size_t target_;
  std::vector<std::size_t> mutable_;
  DomainConstraint constraint_;
  std::map<std::vector<double>, double> archive_;
  std::vector<std::vector<double>> row_seeds_;
};

void check_inputs(const Classifier& model, const DatasetSchema& schema, const Record& query,
                  const CfConfig& config, const DistanceProfile& profile) {
  check_schema(model, schema);
  if (query.values.size() != schema.size() || profile.size() != schema.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "query or profile does not match the schema");
  }
  config.validate();
}

}  // namespace

CfResult generate_counterexamples(const Classifier& model, const DatasetSchema& schema,
                                  const Record& query, const CfConfig& config,
                                  const DistanceProfile& profile, const LabeledDataset& data) {
  check_inputs(model, schema, query, config, profile);
  return Search(model, schema, query, config, profile, data, Mode::kCounterexample).run();
}

CfResult generate_similar_cases(const Classifier& model, const DatasetSchema& schema,
                                const Record& query, const CfConfig& config,
                                const DistanceProfile& profile, const LabeledDataset& data) {
  check_inputs(model, schema, query, config, profile);
  return Search(model, schema, query, config, profile, data, Mode::kSimilar).run();
}

CfResult generate_similar_cases(const Classifier& model, const DatasetSchema& schema,
                                const Record& query, ClassLabel hypothesis, int k,
                                const DistanceProfile& profile, const LabeledDataset& data,
                                std::uint64_t seed) {
  CfConfig config;
  config.target_class = hypothesis;
  config.k = k;
  config.seed = seed;
  return generate_similar_cases(model, schema, query, config, profile, data);
}

OracleResult brute_force_oracle(const Classifier& model, const DatasetSchema& schema,
                                const Record& query, ClassLabel target_class,
                                const std::vector<std::vector<double>>& grid,
                                const DistanceProfile& profile, const DomainConstraint& constraint) {
  check_schema(model, schema);
  const std::size_t d = schema.size();
  if (grid.size() != d || query.values.size() != d) {
    throw Error(ErrorCode::kSchemaMismatch, "oracle grid does not match the schema");
  }
  for (const auto& values : grid) {
    if (values.empty()) throw Error(ErrorCode::kValidation, "oracle grid has an empty axis");
  }

  OracleResult result;
  std::vector<std::size_t> digit(d, 0);
  std::vector<double> x(d);
  std::optional<std::pair<std::size_t, double>> best_key;
  std::vector<double> best_x;

  constexpr std::size_t kBatch = 4096;
  std::vector<double> rows;
  std::vector<Probabilities> probs;
  rows.reserve(kBatch * d);

  auto flush = [&]() {
    const std::size_t n = rows.size() / d;
    if (n == 0) return;
    probs.resize(n);
    model.predict_proba_batch(rows, probs);
    for (std::size_t r = 0; r < n; ++r) {
      const std::span<const double> pt(rows.data() + r * d, d);
      if (argmax_class(probs[r]) != target_class) continue;
      if (constraint && !constraint(pt)) continue;
      const std::size_t sparsity = count_changes(query.values, pt, profile);
      if (sparsity == 0) continue;
      const double prox = distance(query.values, pt, profile);
      const std::pair<std::size_t, double> key{sparsity, prox};
      if (!best_key || key < *best_key) {
        best_key = key;
        best_x.assign(pt.begin(), pt.end());
      }
    }
    rows.clear();
  };

  while (true) {
    bool admissible = true;
    for (std::size_t j = 0; j < d; ++j) {
      x[j] = grid[j][digit[j]];
      if (!profile.mutable_mask[j] && x[j] != query.values[j]) admissible = false;
    }
    ++result.points_enumerated;
    if (admissible) {
      rows.insert(rows.end(), x.begin(), x.end());
      if (rows.size() >= kBatch * d) flush();
    }
    std::size_t j = 0;
    while (j < d && ++digit[j] == grid[j].size()) digit[j++] = 0;
    if (j == d) break;
  }
  flush();

  if (best_key) {
    Counterexample item;
    item.candidate.id = query.id + "-oracle";
    item.candidate.values = best_x;
    item.predicted_class = target_class;
    item.changed_features = changed_features(schema, query.values, best_x, profile);
    item.sparsity = best_key->first;
    item.proximity = best_key->second;
    result.best = std::move(item);
  }
  return result;
}

}  // namespace hxai
