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

#pragma once

#include "irsbf/simharness.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace irsbf {

/// Malformed config document or a field failing validation.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  ExperimentSpec spec;
  std::string output_dir = ".";
  std::string output_format = "csv";
};

/// Parses a JSON config document (empty text means all defaults), applies
/// `key=value` overrides and validates the result. Unknown keys are rejected.
RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});

/// Fully resolved configuration in the same JSON format parse_config reads.
std::string resolved_config_text(const RunConfig& config);

/// CSV body: one comment line describing units, then `x,variant,value,std,trials`.
std::string format_csv(const ExperimentResult& result);
std::vector<ResultRow> parse_csv(const std::string& text);

struct RunOutput {
  ExperimentResult result;
  std::filesystem::path csv_path;
  std::filesystem::path metadata_path;
};

/// Runs the configured experiment and writes `<experiment>.csv` plus the
/// resolved-config sidecar `<experiment>.json` into the output directory.
RunOutput run(const RunConfig& config);

}  // namespace irsbf
