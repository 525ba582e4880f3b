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

#include "irsbf/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace irsbf {

namespace {

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& field) {
  double x = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), x);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw std::invalid_argument("parse_csv: bad number '" + field + "'");
  }
  return x;
}

std::string units_comment(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::snr_vs_distance:
      return "# snr_vs_distance: x = BS-user distance (m); value = mean receive SNR (dB); std = sample std of per-trial SNR (dB)";
    case ExperimentKind::snr_vs_elements:
      return "# snr_vs_elements: x = elements per IRS; value = mean receive SNR (dB); std = sample std of per-trial SNR (dB)";
    case ExperimentKind::eta_validation:
      return "# eta_validation: x = phase bits; value = power ratio gamma(b)/gamma(inf) (linear); std = sample std of per-trial ratios";
    case ExperimentKind::outage_vs_blockage:
      return "# outage_vs_blockage: x = blockage probability; value = outage probability (linear); std = sample std of outage indicators";
  }
  return "#";
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << body;
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace

std::string format_csv(const ExperimentResult& result) {
  std::string out = units_comment(result.kind) + "\n";
  out += "x,variant,value,std,trials\n";
  for (const auto& r : result.rows) {
    out += format_number(r.x) + "," + r.variant + "," + format_number(r.value) + "," +
           format_number(r.std) + "," + std::to_string(r.trials) + "\n";
  }
  return out;
}

std::vector<ResultRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool header = false;
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "x,variant,value,std,trials") throw std::invalid_argument("parse_csv: bad header");
      header = true;
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 5) throw std::invalid_argument("parse_csv: expected 5 fields");
    ResultRow r;
    r.x = parse_number(fields[0]);
    r.variant = fields[1];
    r.value = parse_number(fields[2]);
    r.std = parse_number(fields[3]);
    r.trials = static_cast<int>(parse_number(fields[4]));
    rows.push_back(std::move(r));
  }
  if (!header) throw std::invalid_argument("parse_csv: missing header");
  return rows;
}

RunOutput run(const RunConfig& config) {
  RunOutput out;
  out.result = run_experiment(config.spec);
  const std::filesystem::path dir(config.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
  const std::string stem = to_string(config.spec.kind);
  out.csv_path = dir / (stem + ".csv");
  out.metadata_path = dir / (stem + ".json");
  write_file(out.csv_path, format_csv(out.result));
  write_file(out.metadata_path, resolved_config_text(config));
  return out;
}

}  // namespace irsbf
