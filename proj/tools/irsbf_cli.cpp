// SPDX-License-Identifier: Apache-2.0
//
// irsbf - joint active/passive beamforming for IRS-assisted mmWave links
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "irsbf/analysis.hpp"
#include "irsbf/config.hpp"
#include "irsbf/selfcheck.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides,
            const std::string& out_dir) {
  auto sets = overrides;
  if (!out_dir.empty()) sets.push_back("output_dir=\"" + out_dir + "\"");
  const auto config = irsbf::parse_config(read_text(config_path), sets);
  const auto out = irsbf::run(config);
  std::cout << "wrote " << out.csv_path.string() << " (" << out.result.rows.size() << " rows)\n"
            << "wrote " << out.metadata_path.string() << "\n";
  return 0;
}

int cmd_selfcheck(const std::string& quantizer) {
  const auto metric = quantizer == "linear" ? irsbf::QuantizerMetric::linear : irsbf::QuantizerMetric::circular;
  int failed = 0;
  for (const auto& r : irsbf::run_selfcheck(metric)) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name;
    if (!r.passed) std::cout << ": " << r.detail;
    std::cout << "\n";
    failed += r.passed ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}

int cmd_eta(const std::vector<int>& bits) {
  std::printf("%4s %10s %10s %12s\n", "b", "eta", "eta_dB", "E[e^jdth]");
  for (const int b : bits) {
    if (b < 1) throw std::invalid_argument("b must be >= 1 or 'continuous'");
    std::printf("%4d %10.4f %10.4f %12.6f\n", b, irsbf::eta(b), irsbf::eta_db(b), irsbf::mean_phase_factor(b));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IRS-assisted mmWave joint beamforming experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  run->add_option("config", config_path, "Config file (JSON)")->required();
  run->add_option("--set", overrides, "Override a config key, key=value")->allow_extra_args(false);
  run->add_option("--out", out_dir, "Output directory");

  auto* selfcheck = app.add_subcommand("selfcheck", "Run the fast invariant suite");
  std::string quantizer = "circular";
  selfcheck->add_option("--quantizer", quantizer, "Quantizer distance used by the solver checks")
      ->check(CLI::IsMember({"circular", "linear"}));

  auto* eta = app.add_subcommand("eta", "Print the quantization loss table");
  std::vector<int> bits{1, 2, 3};
  eta->add_option("--bits", bits, "Comma-separated bit counts")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, overrides, out_dir);
    if (*selfcheck) return cmd_selfcheck(quantizer);
    if (*eta) return cmd_eta(bits);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
