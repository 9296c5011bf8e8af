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


// hxai-synth: writes the synthetic thyroid-profile stand-in as an ingest CSV.
// The output is generated data, not the UCI thyroid records.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "hxai/error.hpp"
#include "hxai/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Write a synthetic thyroid-profile stand-in dataset (not UCI data)"};
  std::string out;
  hxai::StandinConfig cfg;
  std::vector<std::size_t> counts;
  app.add_option("--out", out, "Output CSV (default: stdout)");
  app.add_option("--seed", cfg.seed, "Generator seed");
  app.add_option("--missing", cfg.missing_rows, "Extra rows holding a '?' cell");
  app.add_option("--counts", counts, "Records per class: negative hyper hypo")->expected(3);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (!counts.empty()) cfg.class_counts = {counts[0], counts[1], counts[2]};
  try {
    const auto csv = hxai::make_thyroid_standin_csv(hxai::default_schema(), cfg);
    if (out.empty()) {
      std::cout << csv;
    } else {
      std::ofstream f(out, std::ios::binary | std::ios::trunc);
      if (!(f << csv)) throw hxai::Error(hxai::ErrorCode::kIo, "cannot write " + out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
