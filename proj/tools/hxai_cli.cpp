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


// hxai: ingest, train, evaluate, explain, serve, oracle-check.
// Exit codes: 0 success, 1 runtime or domain error, 2 usage error.

#include <cmath>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "hxai/error.hpp"
#include "hxai/gbdt.hpp"
#include "hxai/render.hpp"
#include "hxai/service.hpp"
#include "hxai/session.hpp"
#include "hxai/tabular.hpp"
#include "hxai/toys.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hxai::Error(hxai::ErrorCode::kIo, "cannot read file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

hxai::DatasetSchema schema_from(const std::string& path) {
  return path.empty() ? hxai::default_schema() : hxai::load_schema_file(path);
}

json counts_json(const std::array<std::size_t, hxai::kNumClasses>& counts,
                 const hxai::DatasetSchema& schema) {
  json out = json::object();
  for (std::size_t c = 0; c < hxai::kNumClasses; ++c) out[schema.classes()[c]] = counts[c];
  return out;
}

json report_json(const hxai::EvalReport& r, const hxai::DatasetSchema& schema) {
  json per_class = json::array();
  for (std::size_t c = 0; c < hxai::kNumClasses; ++c) {
    per_class.push_back({{"class", schema.classes()[c]},
                         {"precision", r.precision[c]},
                         {"recall", r.recall[c]},
                         {"f1", r.f1[c]}});
  }
  json confusion = json::array();
  for (const auto& row : r.confusion) confusion.push_back(row);
  return {{"accuracy", r.accuracy}, {"per_class", per_class}, {"confusion", confusion}};
}

json cv_json(const hxai::CvReport& cv, const hxai::DatasetSchema& schema) {
  json folds = json::array();
  for (const auto& f : cv.folds) folds.push_back(report_json(f, schema));
  return {{"folds", folds},
          {"mean_accuracy", cv.mean_accuracy},
          {"mean_precision", cv.mean_precision},
          {"mean_recall", cv.mean_recall},
          {"mean_f1", cv.mean_f1}};
}

// --- ingest -----------------------------------------------------------------

struct IngestArgs {
  std::string data, uci, out, schema;
  bool json = false;
};

int run_ingest(const IngestArgs& a) {
  const auto schema = schema_from(a.schema);
  hxai::IngestResult result;
  json extra = json::object();
  if (!a.uci.empty()) {
    const auto conv = hxai::convert_uci_thyroid0387(read_file(a.uci), schema);
    result = hxai::ingest_csv_text(conv.csv, schema);
    result.report.rows_read = conv.rows_read;
    result.report.rows_dropped += conv.rows_skipped_diagnosis;
    extra["rows_skipped_diagnosis"] = conv.rows_skipped_diagnosis;
  } else {
    result = hxai::ingest_csv(a.data, schema);
  }
  if (!a.out.empty()) hxai::write_csv(result.data, a.out);
  const auto& r = result.report;
  if (a.json) {
    json doc = {{"rows_read", r.rows_read},
                {"rows_dropped", r.rows_dropped},
                {"rows_kept", r.rows_kept()},
                {"class_counts", counts_json(r.class_counts, schema)},
                {"class_proportions", r.class_proportions()}};
    doc.update(extra);
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "rows read    " << r.rows_read << "\nrows dropped " << r.rows_dropped
              << "\nrows kept    " << r.rows_kept() << "\n";
    const auto p = r.class_proportions();
    for (std::size_t c = 0; c < hxai::kNumClasses; ++c) {
      std::printf("  %-13s %6zu  %6.2f%%\n", schema.classes()[c].c_str(), r.class_counts[c],
                  100.0 * p[c]);
    }
    if (!a.out.empty()) std::cout << "wrote " << a.out << "\n";
  }
  return kExitOk;
}

// --- train ------------------------------------------------------------------

struct TrainArgs {
  std::string data, config, out, schema;
  std::size_t kfold = 0;
  std::uint64_t seed = 0;
  double test_fraction = 0.2;
  bool grid = false;
  bool json = false;
};

int run_train(const TrainArgs& a) {
  const auto schema = schema_from(a.schema);
  const auto data = hxai::ingest_csv(a.data, schema).data;
  if (data.empty()) throw hxai::Error(hxai::ErrorCode::kEmptyDataset, "empty dataset");
  hxai::TrainConfig cfg = a.config.empty() ? hxai::TrainConfig{}
                                           : hxai::parse_train_config(read_file(a.config));
  cfg.seed = a.seed;
  json doc = json::object();

  if (a.grid) {
    const auto gs = hxai::grid_search(data, cfg, a.kfold ? a.kfold : 5, a.seed);
    cfg = gs.best;
    cfg.seed = a.seed;
    json scored = json::array();
    for (const auto& [c, acc] : gs.scored) {
      scored.push_back({{"config", json::parse(hxai::train_config_to_json(c))}, {"accuracy", acc}});
    }
    doc["grid"] = scored;
    if (!a.json) {
      std::cout << "grid search (mean CV accuracy)\n";
      for (const auto& [c, acc] : gs.scored) {
        std::printf("  depth %d  lr %.2f  rounds %3d  %.4f\n", c.max_depth, c.learning_rate,
                    c.n_rounds, acc);
      }
    }
  }

  if (a.kfold) {
    const auto cv = hxai::cross_validate(data, cfg, a.kfold, a.seed);
    doc["cross_validation"] = cv_json(cv, schema);
    if (!a.json) std::cout << a.kfold << "-fold cross-validation\n" << hxai::render_cv(cv, schema);
  }

  const auto split = hxai::stratified_split(data, a.test_fraction, a.seed);
  const auto model = hxai::train(split.train, cfg);
  const auto report = hxai::evaluate(model, split.test);
  if (!a.out.empty()) hxai::save_model(model, a.out);
  doc["config"] = json::parse(hxai::train_config_to_json(cfg));
  doc["train_size"] = split.train.size();
  doc["test_size"] = split.test.size();
  doc["test"] = report_json(report, schema);
  if (!a.out.empty()) doc["model"] = a.out;
  if (a.json) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "held-out test (" << split.test.size() << " of " << data.size() << " records)\n"
              << hxai::render_report(report, schema);
    if (!a.out.empty()) std::cout << "wrote " << a.out << "\n";
  }
  return kExitOk;
}

// --- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
  std::string model, data, schema;
  bool holdout = false;
  std::uint64_t seed = 0;
  double test_fraction = 0.2;
  bool json = false;
};

int run_evaluate(const EvaluateArgs& a) {
  const auto schema = schema_from(a.schema);
  const auto model = hxai::load_model(a.model);
  hxai::check_schema(model, schema);
  auto data = hxai::ingest_csv(a.data, schema).data;
  if (a.holdout) data = hxai::stratified_split(data, a.test_fraction, a.seed).test;
  const auto report = hxai::evaluate(model, data);
  if (a.json) {
    std::cout << report_json(report, schema).dump(2) << "\n";
  } else {
    std::cout << hxai::render_report(report, schema);
  }
  return kExitOk;
}

// --- explain ----------------------------------------------------------------

struct ExplainArgs {
  std::string model, data, schema, record_id, record_json, hypothesis;
  std::optional<int> n_cf, n_sc;
  bool importance = false;
  std::optional<std::uint64_t> seed;
  std::size_t samples = 5000;
  bool json = false;
};

std::shared_ptr<const hxai::Engine> load_engine(const std::string& model_path,
                                                const std::string& data_path,
                                                const std::string& schema_path) {
  const auto schema = schema_from(schema_path);
  auto model = std::make_shared<hxai::GbdtModel>(hxai::load_model(model_path));
  auto data = hxai::ingest_csv(data_path, schema).data;
  return std::make_shared<hxai::Engine>(std::move(model), std::move(data));
}

int run_explain(const ExplainArgs& a) {
  auto engine = std::const_pointer_cast<hxai::Engine>(load_engine(a.model, a.data, a.schema));
  engine->perturbation.n_samples = a.samples;
  hxai::HypothesisRequest req;
  req.hypothesis = hxai::parse_class_label(a.hypothesis);
  if (!a.record_json.empty()) {
    json doc;
    try {
      doc = json::parse(a.record_json.front() == '@' ? read_file(a.record_json.substr(1))
                                                     : a.record_json);
    } catch (const json::exception& e) {
      throw hxai::Error(hxai::ErrorCode::kParse, std::string("--record-json: ") + e.what());
    }
    req.record = hxai::record_from_json(doc, engine->schema);
  } else {
    req.record_id = a.record_id;
  }
  req.n_counterexamples_per_class = a.n_cf;
  req.n_similar_cases = a.n_sc;
  req.include_importance = a.importance;
  req.seed = a.seed;
  const auto bundle = hxai::handle_request(req, *engine);
  if (a.json) {
    std::cout << hxai::bundle_text(bundle, engine->schema) << "\n";
  } else {
    std::cout << hxai::render_bundle(bundle, engine->schema);
  }
  return kExitOk;
}

// --- serve ------------------------------------------------------------------

struct ServeArgs {
  hxai::ServiceConfig config;
  std::string host;
  std::optional<int> port;  // 0 asks for an ephemeral port
  bool json = false;
};

hxai::ExplainService* g_service = nullptr;

int run_serve(ServeArgs a) {
  auto& cfg = a.config;
  hxai::apply_environment(cfg);
  if (!a.host.empty()) cfg.host = a.host;
  if (a.port) cfg.port = *a.port;
  if (cfg.model_path.empty() || cfg.data_path.empty()) {
    throw hxai::Error(hxai::ErrorCode::kPrecondition,
                      "serve needs a model and a dataset (--model/--data or HXAI_MODEL/HXAI_DATA)");
  }
  auto engine = load_engine(cfg.model_path, cfg.data_path, cfg.schema_path);
  auto log = cfg.log_path.empty() ? std::make_shared<hxai::SessionLog>()
                                  : std::make_shared<hxai::SessionLog>(cfg.log_path);
  hxai::ExplainService service(engine, log);
  const int port = cfg.port == 0 ? service.bind_any_port(cfg.host) : service.bind(cfg.host, cfg.port);
  if (a.json) {
    // One line on stdout so a supervisor can pick up an ephemeral port.
    std::cout << json{{"host", cfg.host}, {"port", port},
                      {"schema_fingerprint", engine->model->schema_fingerprint()},
                      {"records", engine->data.size()}}.dump()
              << std::endl;
  } else {
    std::cerr << "listening on " << cfg.host << ":" << port << " (model "
              << engine->model->schema_fingerprint() << ", " << engine->data.size()
              << " records)\n";
  }
  g_service = &service;
  std::signal(SIGINT, [](int) {
    if (g_service) g_service->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_service) g_service->stop();
  });
  service.listen();
  g_service = nullptr;
  return kExitOk;
}

// --- oracle-check -----------------------------------------------------------

struct OracleArgs {
  std::string toy = "all";
  int generations = 50;
  std::vector<std::uint64_t> seeds;
  bool json = false;
};

int run_oracle_check(const OracleArgs& a) {
  std::vector<hxai::ToyProblem> toys = hxai::bundled_toys();
  toys.push_back(hxai::empty_toy());
  if (a.toy != "all") {
    std::erase_if(toys, [&](const hxai::ToyProblem& t) { return t.name != a.toy; });
    if (toys.empty()) throw hxai::Error(hxai::ErrorCode::kValidation, "unknown toy: " + a.toy);
  }
  std::vector<std::uint64_t> seeds = a.seeds;
  if (seeds.empty()) seeds.assign(hxai::kSeedSuite.begin(), hxai::kSeedSuite.end());

  bool all_pass = true;
  json rows = json::array();
  for (const auto& toy : toys) {
    for (auto seed : seeds) {
      const auto c = hxai::run_oracle_check(toy, seed, a.generations);
      all_pass = all_pass && c.pass;
      json row = {{"toy", c.toy}, {"seed", c.seed}, {"feasible", c.feasible}, {"pass", c.pass}};
      if (c.feasible) {
        row["oracle_proximity"] = c.oracle_proximity;
        row["oracle_sparsity"] = c.oracle_sparsity;
        row["ratio"] = std::isfinite(c.ratio) ? json(c.ratio) : json("inf");
        if (c.search_proximity) {
          row["search_proximity"] = *c.search_proximity;
          row["search_sparsity"] = c.search_sparsity;
        }
      }
      rows.push_back(row);
      if (a.json) continue;
      if (!c.feasible) {
        std::printf("%-11s seed %-3llu no counterfactual in grid            PASS (vacuous)\n",
                    c.toy.c_str(), static_cast<unsigned long long>(c.seed));
        continue;
      }
      std::printf("%-11s seed %-3llu oracle %.5f/%zu  search ", c.toy.c_str(),
                  static_cast<unsigned long long>(c.seed), c.oracle_proximity, c.oracle_sparsity);
      if (c.search_proximity) {
        std::printf("%.5f/%zu", *c.search_proximity, c.search_sparsity);
      } else {
        std::printf("none     ");
      }
      if (std::isfinite(c.ratio)) {
        std::printf("  ratio %.3f  %s\n", c.ratio, c.pass ? "PASS" : "FAIL");
      } else {
        std::printf("  ratio inf  FAIL\n");
      }
    }
  }
  if (a.json) {
    std::cout << json{{"pass", all_pass}, {"bound", hxai::kOracleRatioBound}, {"checks", rows}}.dump(2)
              << "\n";
  } else {
    std::cout << (all_pass ? "all checks passed" : "oracle check FAILED") << "\n";
  }
  return all_pass ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypothesis-anchored explanations for a thyroid classifier"};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Validate a dataset file and report class counts");
  c_ingest->add_option("--data", ingest.data, "CSV in the ingest format");
  c_ingest->add_option("--uci-thyroid0387", ingest.uci, "Raw UCI thyroid0387.data file to convert");
  c_ingest->add_option("--out", ingest.out, "Write the cleaned CSV here");
  c_ingest->add_option("--schema", ingest.schema, "Schema document (default: built-in)");
  c_ingest->add_flag("--json", ingest.json, "Machine-readable output");

  TrainArgs train;
  auto* c_train = app.add_subcommand("train", "Train on an 80/20 split and report held-out metrics");
  c_train->add_option("--data", train.data, "Training CSV")->required();
  c_train->add_option("--config", train.config, "TrainConfig JSON file");
  c_train->add_option("--out", train.out, "Model artifact path");
  c_train->add_option("--kfold", train.kfold, "Also run k-fold cross-validation")
      ->check(CLI::Range(2, 100));
  c_train->add_option("--seed", train.seed, "Seed for split, folds and subsampling");
  c_train->add_option("--test-fraction", train.test_fraction, "Held-out fraction")
      ->check(CLI::Range(0.01, 0.99));
  c_train->add_flag("--grid", train.grid, "Grid-search depth, learning rate and rounds first");
  c_train->add_option("--schema", train.schema, "Schema document (default: built-in)");
  c_train->add_flag("--json", train.json, "Machine-readable output");

  EvaluateArgs eval;
  auto* c_eval = app.add_subcommand("evaluate", "Score a saved model on a dataset");
  c_eval->add_option("--model", eval.model, "Model artifact")->required();
  c_eval->add_option("--data", eval.data, "CSV to score")->required();
  c_eval->add_flag("--holdout", eval.holdout, "Score only the test part of the training split");
  c_eval->add_option("--seed", eval.seed, "Split seed used with --holdout");
  c_eval->add_option("--test-fraction", eval.test_fraction, "Split fraction used with --holdout")
      ->check(CLI::Range(0.01, 0.99));
  c_eval->add_option("--schema", eval.schema, "Schema document (default: built-in)");
  c_eval->add_flag("--json", eval.json, "Machine-readable output");

  ExplainArgs explain;
  auto* c_explain = app.add_subcommand("explain", "Explain one record under a stated hypothesis");
  c_explain->add_option("--model", explain.model, "Model artifact")->required();
  c_explain->add_option("--data", explain.data, "Dataset CSV (record lookup and search seeding)")
      ->required();
  auto* o_id = c_explain->add_option("--record-id", explain.record_id, "Record id in --data");
  auto* o_rec = c_explain->add_option("--record-json", explain.record_json,
                                      "Inline record as JSON, or @file");
  o_id->excludes(o_rec);
  c_explain->add_option("--hypothesis", explain.hypothesis, "Class index or name")->required();
  c_explain->add_option("--n-cf", explain.n_cf, "Counterexamples per alternate class")
      ->check(CLI::Range(0, 10));
  c_explain->add_option("--n-sc", explain.n_sc, "Similar cases")->check(CLI::Range(0, 10));
  c_explain->add_flag("--importance", explain.importance, "Include feature importance");
  c_explain->add_option("--seed", explain.seed, "Request seed (default: random, printed)");
  c_explain->add_option("--samples", explain.samples, "Perturbation samples for importance")
      ->check(CLI::Range(1, 1000000));
  c_explain->add_option("--schema", explain.schema, "Schema document (default: built-in)");
  c_explain->add_flag("--json", explain.json, "Print the bundle as JSON");

  ServeArgs serve;
  auto* c_serve = app.add_subcommand("serve", "Run the HTTP+JSON service");
  c_serve->add_option("--model", serve.config.model_path, "Model artifact (env HXAI_MODEL)");
  c_serve->add_option("--data", serve.config.data_path, "Dataset CSV (env HXAI_DATA)");
  c_serve->add_option("--log", serve.config.log_path, "Session log JSONL (env HXAI_LOG)");
  c_serve->add_option("--schema", serve.config.schema_path, "Schema document (env HXAI_SCHEMA)");
  c_serve->add_option("--host", serve.host, "Listen host (env HXAI_LISTEN=host:port)");
  c_serve->add_option("--port", serve.port, "Listen port, 0 for any free port")
      ->check(CLI::Range(0, 65535));
  c_serve->add_flag("--json", serve.json, "Announce the bound address as JSON on stdout");

  OracleArgs oracle;
  auto* c_oracle =
      app.add_subcommand("oracle-check", "Compare the search with enumeration on toy problems");
  c_oracle->add_option("--toy", oracle.toy,
                       "threshold, sum, box, boolean-or, trained, empty or all");
  c_oracle->add_option("--generations", oracle.generations, "Search generations")
      ->check(CLI::Range(0, 100000));
  c_oracle->add_option("--seeds", oracle.seeds, "Seeds (default: the 5-seed suite)");
  c_oracle->add_flag("--json", oracle.json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (c_explain->parsed() && explain.record_id.empty() && explain.record_json.empty()) {
      std::cerr << "error: explain needs --record-id or --record-json\n";
      return kExitUsage;
    }
    if (c_ingest->parsed() && ingest.data.empty() && ingest.uci.empty()) {
      std::cerr << "error: ingest needs --data or --uci-thyroid0387\n";
      return kExitUsage;
    }
    if (c_ingest->parsed()) return run_ingest(ingest);
    if (c_train->parsed()) return run_train(train);
    if (c_eval->parsed()) return run_evaluate(eval);
    if (c_explain->parsed()) return run_explain(explain);
    if (c_serve->parsed()) return run_serve(serve);
    if (c_oracle->parsed()) return run_oracle_check(oracle);
  } catch (const hxai::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}
