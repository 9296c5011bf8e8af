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


#include "hxai/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hxai/error.hpp"
#include "hxai/rng.hpp"
#include "text_util.hpp"

namespace hxai {
namespace {

// Divides an exact integer so the result is the double nearest the decimal.
double round_to(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(v * scale) / scale;
}

struct Sampler {
  Rng rng;
  std::uniform_real_distribution<double> unit{0.0, 1.0};

  bool coin(double p) { return unit(rng) < p; }
  double normal(double mean, double sd) { return std::normal_distribution<double>(mean, sd)(rng); }
  double lognormal(double median, double sigma) {
    return median * std::exp(std::normal_distribution<double>(0.0, sigma)(rng));
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(rng); }
};

// Per-class boolean prevalences: {Negative, Hyperthyroid, Hypothyroid}.
struct Prevalence {
  const char* name;
  std::array<double, kNumClasses> p;
};

constexpr Prevalence kBooleans[] = {
    {"on_thyroxine", {0.12, 0.05, 0.20}},       {"on_antithyroid_meds", {0.012, 0.05, 0.01}},
    {"sick", {0.04, 0.04, 0.03}},               {"thyroid_surgery", {0.014, 0.01, 0.05}},
    {"I131_treatment", {0.017, 0.03, 0.06}},    {"query_hypothyroid", {0.06, 0.03, 0.25}},
    {"query_hyperthyroid", {0.06, 0.30, 0.04}}, {"lithium", {0.005, 0.0, 0.02}},
    {"goitre", {0.009, 0.03, 0.02}},            {"tumor", {0.025, 0.03, 0.02}},
    {"psych", {0.05, 0.04, 0.03}},
};

std::vector<double> sample_record(const DatasetSchema& s, int cls, Sampler& r) {
  std::vector<double> v(s.size(), 0.0);
  const auto c = static_cast<std::size_t>(cls);
  auto set = [&](std::string_view name, double x) { v[s.index_of(name)] = x; };

  const double age = std::clamp(std::round(r.normal(cls == 1 ? 45.0 : 53.0, 19.0)), 1.0, 95.0);
  const bool male = r.coin(0.31);
  set("age", age);
  set("sex", male ? 1.0 : 0.0);
  set("pregnant", !male && age >= 18 && age <= 45 && r.coin(0.04) ? 1.0 : 0.0);
  for (const auto& b : kBooleans) set(b.name, r.coin(b.p[c]) ? 1.0 : 0.0);
  set("hypopituitary", r.coin(0.001) ? 1.0 : 0.0);

  double tsh = 0.0, t3 = 0.0, tt4 = 0.0, t4u = std::clamp(r.normal(0.98, 0.15), 0.25, 2.1);
  switch (cls) {
    case 0:
      // A tenth of euthyroid patients sit at low TSH with normal hormones.
      tsh = r.coin(0.10) ? r.uniform(0.01, 0.35) : std::clamp(r.lognormal(1.4, 0.6), 0.02, 9.0);
      t3 = r.normal(2.0, 0.5);
      tt4 = r.normal(108.0, 22.0);
      break;
    case 1:
      tsh = std::clamp(r.lognormal(0.02, 0.8), 0.005, 0.4);
      t3 = r.normal(3.8, 1.0);
      tt4 = r.normal(170.0, 35.0);
      t4u = std::clamp(t4u + 0.07, 0.25, 2.1);
      break;
    default:
      tsh = std::clamp(r.lognormal(12.0, 0.8), 4.0, 480.0);
      t3 = r.normal(1.3, 0.5);
      tt4 = r.normal(66.0, 20.0);
      break;
  }
  t3 = std::clamp(t3, 0.05, 10.6);
  tt4 = std::clamp(tt4, 2.0, 430.0);
  const double fti = std::clamp(tt4 / t4u * (1.0 + r.normal(0.0, 0.03)), 1.4, 840.0);
  set("TSH", round_to(tsh, 3));
  set("T3", round_to(t3, 2));
  set("TT4", round_to(tt4, 0));
  set("T4U", round_to(t4u, 2));
  set("FTI", round_to(fti, 0));
  return v;
}

}  // namespace

LabeledDataset make_thyroid_standin(const DatasetSchema& schema, const StandinConfig& config) {
  std::vector<int> classes;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    classes.insert(classes.end(), config.class_counts[c], static_cast<int>(c));
  }
  Rng order_rng(derive_seed(config.seed, 1));
  std::shuffle(classes.begin(), classes.end(), order_rng);

  Sampler sampler{Rng(derive_seed(config.seed, 2))};
  LabeledDataset out;
  out.schema = schema;
  out.records.reserve(classes.size());
  out.labels.reserve(classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i) {
    out.records.push_back(
        Record{"S" + std::to_string(i + 1), sample_record(schema, classes[i], sampler)});
    out.labels.emplace_back(classes[i]);
  }
  return out;
}

std::string make_thyroid_standin_csv(const DatasetSchema& schema, const StandinConfig& config) {
  const auto data = make_thyroid_standin(schema, config);
  const std::string full = to_csv(data);
  if (config.missing_rows == 0) return full;

  std::vector<std::string> lines;
  for (auto l : text::split_lines(full)) lines.emplace_back(l);
  Rng rng(derive_seed(config.seed, 3));
  Sampler sampler{Rng(derive_seed(config.seed, 4))};
  std::uniform_int_distribution<std::size_t> where(1, lines.size() - 1);
  std::uniform_int_distribution<std::size_t> column(0, schema.size() - 1);
  std::uniform_int_distribution<int> label(0, static_cast<int>(kNumClasses) - 1);
  for (std::size_t m = 0; m < config.missing_rows; ++m) {
    const int cls = label(rng);
    auto values = sample_record(schema, cls, sampler);
    const std::size_t hole = column(rng);
    std::string row = "M" + std::to_string(m + 1);
    for (std::size_t j = 0; j < values.size(); ++j) {
      row += ',';
      row += j == hole ? std::string("?") : text::format_number(values[j]);
    }
    row += ',' + std::to_string(cls);
    lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(where(rng)), row);
  }
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

}  // namespace hxai
