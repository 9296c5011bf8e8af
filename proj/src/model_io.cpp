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

#include <fstream>
#include <sstream>

#include "hxai/error.hpp"
#include "hxai/gbdt.hpp"
#include "json.hpp"

namespace hxai {
namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "hxai-gbdt";

json config_json(const TrainConfig& c) {
  return {{"n_rounds", c.n_rounds},
          {"max_depth", c.max_depth},
          {"learning_rate", c.learning_rate},
          {"min_samples_leaf", c.min_samples_leaf},
          {"subsample_fraction", c.subsample_fraction},
          {"seed", c.seed},
          {"l2_lambda", c.l2_lambda}};
}

TrainConfig config_from_json(const json& j) {
  TrainConfig c;
  c.n_rounds = j.value("n_rounds", c.n_rounds);
  c.max_depth = j.value("max_depth", c.max_depth);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.min_samples_leaf = j.value("min_samples_leaf", c.min_samples_leaf);
  c.subsample_fraction = j.value("subsample_fraction", c.subsample_fraction);
  c.seed = j.value("seed", c.seed);
  c.l2_lambda = j.value("l2_lambda", c.l2_lambda);
  return c;
}

}  // namespace

std::string serialize_model(const GbdtModel& model) {
  json trees = json::array();
  for (const auto& per_class : model.trees()) {
    json list = json::array();
    for (const auto& t : per_class) {
      list.push_back({{"feature", t.feature},
                      {"threshold", t.threshold},
                      {"left", t.left},
                      {"right", t.right},
                      {"value", t.value}});
    }
    trees.push_back(std::move(list));
  }
  json doc = {{"format", kFormatTag},
              {"version", kModelFormatVersion},
              {"schema_fingerprint", model.schema_fingerprint()},
              {"num_features", model.num_features()},
              {"config", config_json(model.config())},
              {"base_scores", model.base_scores()},
              {"trees", std::move(trees)}};
  return doc.dump() + "\n";
}

GbdtModel parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kModelFormat, std::string("corrupt model file: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kFormatTag) {
      throw Error(ErrorCode::kModelFormat, "not an hxai-gbdt model file");
    }
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw Error(ErrorCode::kModelFormat, "unsupported model version " + std::to_string(version) +
                                               " (expected " +
                                               std::to_string(kModelFormatVersion) + ")");
    }
    const auto base = doc.at("base_scores").get<std::vector<double>>();
    if (base.size() != kNumClasses) throw Error(ErrorCode::kModelFormat, "base_scores arity");
    const auto& tree_lists = doc.at("trees");
    if (!tree_lists.is_array() || tree_lists.size() != kNumClasses) {
      throw Error(ErrorCode::kModelFormat, "trees must hold one list per class");
    }
    std::array<std::vector<Tree>, kNumClasses> trees;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      for (const auto& t : tree_lists[c]) {
        Tree tree;
        tree.feature = t.at("feature").get<std::vector<int>>();
        tree.threshold = t.at("threshold").get<std::vector<double>>();
        tree.left = t.at("left").get<std::vector<int>>();
        tree.right = t.at("right").get<std::vector<int>>();
        tree.value = t.at("value").get<std::vector<double>>();
        trees[c].push_back(std::move(tree));
      }
    }
    return GbdtModel(doc.at("schema_fingerprint").get<std::string>(),
                     doc.at("num_features").get<std::size_t>(), {base[0], base[1], base[2]},
                     std::move(trees), config_from_json(doc.at("config")));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kModelFormat, std::string("corrupt model file: ") + e.what());
  }
}

void save_model(const GbdtModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write model: " + path.string());
  out << serialize_model(model);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

GbdtModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read model: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

TrainConfig parse_train_config(std::string_view json_text) {
  try {
    auto cfg = config_from_json(json::parse(json_text));
    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("invalid train config: ") + e.what());
  }
}

std::string train_config_to_json(const TrainConfig& config) { return config_json(config).dump(2); }

}  // namespace hxai
