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

// Drives the hxai binary end to end on a small generated dataset.

#include <gtest/gtest.h>
#include <signal.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "httplib.h"
#include "json.hpp"

#include "hxai/gbdt.hpp"
#include "hxai/session.hpp"
#include "hxai/tabular.hpp"

namespace hxai {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("hxai_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run(const std::string& args, const char* binary = HXAI_CLI) {
  const auto err_path = work_dir() / "stderr.txt";
  const std::string cmd = std::string("'") + binary + "' " + args + " 2>'" + err_path.string() + "'";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err_path);
  return r;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

// Generated data and a 30-round model, built once through the CLI itself.
class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    data_ = work_dir() / "data.csv";
    model_ = work_dir() / "model.json";
    config_ = work_dir() / "config.json";
    ASSERT_EQ(run("--seed 11 --counts 638 58 20 --out " + q(data_), HXAI_SYNTH).code, 0);
    TrainConfig cfg;
    cfg.n_rounds = 30;
    cfg.max_depth = 3;
    std::ofstream(config_) << train_config_to_json(cfg);
    const auto r = run("train --data " + q(data_) + " --config " + q(config_) + " --out " +
                       q(model_) + " --json");
    ASSERT_EQ(r.code, 0) << r.err;
  }
  static void TearDownTestSuite() { fs::remove_all(work_dir()); }

  static fs::path data_, model_, config_;
};
fs::path Cli::data_, Cli::model_, Cli::config_;

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("train --data " + q(data_) + " --bogus").code, 2);
  EXPECT_EQ(run("train").code, 2);  // --data is required
  const auto r = run("explain --model " + q(model_) + " --data " + q(data_) + " --hypothesis 0");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--record-id"), std::string::npos);
}

TEST_F(Cli, HelpExitsZero) {
  const auto r = run("--help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("oracle-check"), std::string::npos);
  EXPECT_EQ(run("explain --help").code, 0);
}

TEST_F(Cli, CountOutsideRangeIsRejected) {
  const std::string base =
      "explain --model " + q(model_) + " --data " + q(data_) + " --record-id S1 --hypothesis 0";
  EXPECT_EQ(run(base + " --n-cf 11").code, 2);
  EXPECT_EQ(run(base + " --n-sc -1").code, 2);
}

TEST_F(Cli, IngestReportsCounts) {
  const auto r = run("ingest --data " + q(data_) + " --json");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["rows_kept"], 716);
  EXPECT_EQ(doc["class_counts"]["Negative"], 638);
  EXPECT_EQ(doc["class_counts"]["Hyperthyroid"], 58);
  EXPECT_EQ(doc["class_counts"]["Hypothyroid"], 20);
}

TEST_F(Cli, EmptyDatasetIsAnError) {
  const auto empty = work_dir() / "empty.csv";
  std::ofstream(empty).close();
  const auto r = run("train --data " + q(empty));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("error: "), std::string::npos);
  EXPECT_NE(r.err.find("empty"), std::string::npos);
}

TEST_F(Cli, MissingFileIsAnError) {
  const auto r = run("ingest --data " + q(work_dir() / "nope.csv"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("nope.csv"), std::string::npos);
}

TEST_F(Cli, UnknownRecordIsAnError) {
  const auto r = run("explain --model " + q(model_) + " --data " + q(data_) +
                     " --record-id no-such-record --hypothesis 0 --seed 1");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("record not found: no-such-record"), std::string::npos);
}

TEST_F(Cli, UnknownClassIsAnError) {
  const auto r = run("explain --model " + q(model_) + " --data " + q(data_) +
                     " --record-id S1 --hypothesis 3 --seed 1");
  EXPECT_EQ(r.code, 1);
}

TEST_F(Cli, TrainIsDeterministic) {
  const auto again = work_dir() / "model2.json";
  ASSERT_EQ(run("train --data " + q(data_) + " --config " + q(config_) + " --out " + q(again)).code,
            0);
  EXPECT_EQ(slurp(model_), slurp(again));
}

TEST_F(Cli, TrainReportsHeldOutMetrics) {
  const auto r = run("train --data " + q(data_) + " --config " + q(config_) + " --json");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["train_size"].get<int>() + doc["test_size"].get<int>(), 716);
  EXPECT_GT(doc["test"]["accuracy"].get<double>(), 0.5);
}

TEST_F(Cli, EvaluateMatchesInProcess) {
  const auto r = run("evaluate --model " + q(model_) + " --data " + q(data_) + " --json");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto model = load_model(model_);
  const auto data = ingest_csv(data_, default_schema()).data;
  const auto report = evaluate(model, data);
  EXPECT_DOUBLE_EQ(json::parse(r.out)["accuracy"].get<double>(), report.accuracy);
}

TEST_F(Cli, ExplainJsonMatchesInProcessBundle) {
  const auto r = run("explain --model " + q(model_) + " --data " + q(data_) +
                     " --record-id S1 --hypothesis Hypothyroid --seed 9 --n-cf 2 --n-sc 2 --json");
  ASSERT_EQ(r.code, 0) << r.err;

  auto model = std::make_shared<GbdtModel>(load_model(model_));
  const Engine engine(model, ingest_csv(data_, default_schema()).data);
  HypothesisRequest req;
  req.record_id = "S1";
  req.hypothesis = ClassLabel(2);
  req.n_counterexamples_per_class = 2;
  req.n_similar_cases = 2;
  req.seed = 9;
  EXPECT_EQ(r.out, bundle_text(handle_request(req, engine), engine.schema) + "\n");
}

TEST_F(Cli, ExplainTextRendersSections) {
  const auto r = run("explain --model " + q(model_) + " --data " + q(data_) +
                     " --record-id S2 --hypothesis 0 --seed 4 --n-cf 1 --n-sc 1 --importance");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("Hypothyroid"), std::string::npos);
  EXPECT_NE(r.out.find("TSH"), std::string::npos);
}

TEST_F(Cli, OracleCheckPasses) {
  const auto r = run("oracle-check --toy threshold --seeds 1 2 --json");
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_TRUE(doc["pass"].get<bool>());
  EXPECT_EQ(doc["checks"].size(), 2u);
}

TEST_F(Cli, ServeAnnouncesPortAndStopsOnSigterm) {
  // The shell prints its pid, then execs the server under the same pid.
  const std::string cmd = "sh -c 'echo $$; exec \"" + std::string(HXAI_CLI) +
                          "\" serve --model " + q(model_) + " --data " + q(data_) +
                          " --port 0 --json' 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  char line[512];
  ASSERT_NE(std::fgets(line, sizeof line, pipe), nullptr);
  const pid_t pid = std::stoi(line);
  ASSERT_NE(std::fgets(line, sizeof line, pipe), nullptr);
  const auto doc = json::parse(line);
  const int port = doc["port"].get<int>();
  EXPECT_GT(port, 0);
  EXPECT_EQ(doc["records"], 716);

  httplib::Client client("127.0.0.1", port);
  const auto res = client.Get("/health");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);

  ::kill(pid, SIGTERM);
  const int status = ::pclose(pipe);
  EXPECT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
}

TEST_F(Cli, OracleCheckUnknownToy) { EXPECT_EQ(run("oracle-check --toy nope").code, 1); }

}  // namespace
}  // namespace hxai
