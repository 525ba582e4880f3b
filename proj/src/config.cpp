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

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace irsbf {

namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "experiment", "N", "K", "M_y", "M_z", "p_dbm", "noise_dbm", "b", "gain_tx_dbi", "gain_rx_dbi",
      "los_e", "los_f", "los_sigma_db", "nlos_e", "nlos_f", "nlos_sigma_db", "paths",
      "freeze_shadowing", "d_b", "d_v", "d_span", "d_u", "sweep", "trials", "seed", "variants",
      "tau_db", "inner_trials", "varrho", "workers", "output_dir", "output_format"};
  return keys;
}

[[noreturn]] void field_error(const std::string& key, const std::string& what) {
  throw ConfigError("invalid '" + key + "': " + what);
}

double get_number(const json& doc, const std::string& key, double fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& v = doc.at(key);
  if (!v.is_number()) field_error(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) field_error(key, "must be finite");
  return x;
}

long long get_integer(const json& doc, const std::string& key, long long fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& v = doc.at(key);
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (x == std::floor(x) && std::abs(x) < 9e15) return static_cast<long long>(x);
  }
  field_error(key, "expected an integer");
}

int get_int(const json& doc, const std::string& key, int fallback) {
  const long long v = get_integer(doc, key, fallback);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    field_error(key, "out of range");
  }
  return static_cast<int>(v);
}

std::string get_string(const json& doc, const std::string& key, const std::string& fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& v = doc.at(key);
  if (!v.is_string()) field_error(key, "expected a string");
  return v.get<std::string>();
}

PhaseResolution get_resolution(const json& doc) {
  if (!doc.contains("b")) return PhaseResolution::bits(2);
  const auto& v = doc.at("b");
  try {
    if (v.is_string()) return PhaseResolution::parse(v.get<std::string>());
    if (v.is_number_integer()) {
      const auto b = v.get<long long>();
      if (b < 1 || b > 30) throw std::invalid_argument("");
      return PhaseResolution::bits(static_cast<int>(b));
    }
  } catch (const std::invalid_argument&) {
  }
  throw ConfigError("invalid 'b': b must be >= 1 or 'continuous'");
}

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json parse_document(const std::string& text) {
  const bool blank = std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); });
  if (blank) return json::object();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_and_column(text, e.byte);
    throw ConfigError("parse error at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("parse error at line 1, column 1: top level must be an object");
  return doc;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' must have the form key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  json parsed = json::parse(value, nullptr, false);
  doc[key] = parsed.is_discarded() ? json(value) : parsed;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  json doc = parse_document(text);
  for (const auto& o : overrides) apply_override(doc, o);
  for (const auto& item : doc.items()) {
    if (!known_keys().contains(item.key())) throw ConfigError("unknown key '" + item.key() + "'");
  }

  RunConfig rc;
  auto& spec = rc.spec;
  try {
    spec.kind = parse_experiment_kind(get_string(doc, "experiment", "snr_vs_distance"));
  } catch (const std::invalid_argument& e) {
    field_error("experiment", e.what());
  }

  auto& cfg = spec.cfg;
  cfg.bs_antennas = get_int(doc, "N", cfg.bs_antennas);
  cfg.irs_count = get_int(doc, "K", cfg.irs_count);
  cfg.elements_y = get_int(doc, "M_y", cfg.elements_y);
  cfg.elements_z = get_int(doc, "M_z", cfg.elements_z);
  cfg.tx_power_dbm = get_number(doc, "p_dbm", cfg.tx_power_dbm);
  cfg.noise_dbm = get_number(doc, "noise_dbm", cfg.noise_dbm);
  cfg.resolution = get_resolution(doc);
  cfg.gain_tx_dbi = get_number(doc, "gain_tx_dbi", cfg.gain_tx_dbi);
  cfg.gain_rx_dbi = get_number(doc, "gain_rx_dbi", cfg.gain_rx_dbi);
  cfg.los.intercept_db = get_number(doc, "los_e", cfg.los.intercept_db);
  cfg.los.exponent = get_number(doc, "los_f", cfg.los.exponent);
  cfg.los.shadowing_std_db = get_number(doc, "los_sigma_db", cfg.los.shadowing_std_db);
  cfg.nlos.intercept_db = get_number(doc, "nlos_e", cfg.nlos.intercept_db);
  cfg.nlos.exponent = get_number(doc, "nlos_f", cfg.nlos.exponent);
  cfg.nlos.shadowing_std_db = get_number(doc, "nlos_sigma_db", cfg.nlos.shadowing_std_db);
  cfg.paths = get_int(doc, "paths", cfg.paths);
  if (doc.contains("freeze_shadowing")) {
    if (!doc.at("freeze_shadowing").is_boolean()) field_error("freeze_shadowing", "expected true or false");
    cfg.freeze_shadowing = doc.at("freeze_shadowing").get<bool>();
  }

  auto& geom = spec.geom;
  geom.bs_to_first_irs = get_number(doc, "d_b", geom.bs_to_first_irs);
  geom.vertical_offset = get_number(doc, "d_v", geom.vertical_offset);
  geom.irs_span = get_number(doc, "d_span", geom.irs_span);
  const double default_du = spec.kind == ExperimentKind::outage_vs_blockage ? 61.0 : 41.0;
  geom.bs_to_user = get_number(doc, "d_u", default_du);

  spec.sweep = default_sweep(spec.kind);
  if (doc.contains("sweep")) {
    const auto& s = doc.at("sweep");
    if (!s.is_array()) field_error("sweep", "expected an array of numbers");
    spec.sweep.clear();
    for (const auto& x : s) {
      if (!x.is_number()) field_error("sweep", "expected an array of numbers");
      spec.sweep.push_back(x.get<double>());
    }
  }
  spec.variants = default_variants(spec.kind);
  if (spec.kind == ExperimentKind::outage_vs_blockage && !cfg.resolution.is_continuous()) {
    spec.variants = {Variant::proposed(cfg.resolution.bit_count())};
  }
  if (doc.contains("variants")) {
    const auto& v = doc.at("variants");
    if (!v.is_array()) field_error("variants", "expected an array of names");
    spec.variants.clear();
    for (const auto& name : v) {
      if (!name.is_string()) field_error("variants", "expected an array of names");
      try {
        spec.variants.push_back(Variant::parse(name.get<std::string>()));
      } catch (const std::invalid_argument& e) {
        field_error("variants", e.what());
      }
    }
  }

  const long long trials = get_integer(doc, "trials", spec.trials);
  if (trials < 1 || trials > std::numeric_limits<int>::max()) field_error("trials", "must be >= 1");
  spec.trials = static_cast<int>(trials);
  if (doc.contains("seed")) {
    const auto& s = doc.at("seed");
    if (!s.is_number_unsigned()) field_error("seed", "expected a non-negative integer");
    spec.seed = s.get<std::uint64_t>();
  }
  spec.tau_db = get_number(doc, "tau_db", spec.tau_db);
  spec.inner_trials = get_int(doc, "inner_trials", spec.inner_trials);
  spec.varrho = get_number(doc, "varrho", spec.varrho);
  spec.workers = get_int(doc, "workers", spec.workers);
  rc.output_dir = get_string(doc, "output_dir", rc.output_dir);
  rc.output_format = get_string(doc, "output_format", rc.output_format);
  if (rc.output_format != "csv") field_error("output_format", "only 'csv' is supported");

  if (spec.kind == ExperimentKind::outage_vs_blockage && cfg.resolution.is_continuous()) {
    field_error("b", "outage_vs_blockage needs a finite resolution");
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("validation error: ") + e.what());
  }
  return rc;
}

std::string resolved_config_text(const RunConfig& config) {
  const auto& spec = config.spec;
  const auto& cfg = spec.cfg;
  json doc;
  doc["experiment"] = to_string(spec.kind);
  doc["N"] = cfg.bs_antennas;
  doc["K"] = cfg.irs_count;
  doc["M_y"] = cfg.elements_y;
  doc["M_z"] = cfg.elements_z;
  doc["p_dbm"] = cfg.tx_power_dbm;
  doc["noise_dbm"] = cfg.noise_dbm;
  if (cfg.resolution.is_continuous()) {
    doc["b"] = "continuous";
  } else {
    doc["b"] = cfg.resolution.bit_count();
  }
  doc["gain_tx_dbi"] = cfg.gain_tx_dbi;
  doc["gain_rx_dbi"] = cfg.gain_rx_dbi;
  doc["los_e"] = cfg.los.intercept_db;
  doc["los_f"] = cfg.los.exponent;
  doc["los_sigma_db"] = cfg.los.shadowing_std_db;
  doc["nlos_e"] = cfg.nlos.intercept_db;
  doc["nlos_f"] = cfg.nlos.exponent;
  doc["nlos_sigma_db"] = cfg.nlos.shadowing_std_db;
  doc["paths"] = cfg.paths;
  doc["freeze_shadowing"] = cfg.freeze_shadowing;
  doc["d_b"] = spec.geom.bs_to_first_irs;
  doc["d_v"] = spec.geom.vertical_offset;
  doc["d_span"] = spec.geom.irs_span;
  doc["d_u"] = spec.geom.bs_to_user;
  doc["sweep"] = spec.sweep;
  json variants = json::array();
  for (const auto& v : spec.variants) variants.push_back(v.name());
  doc["variants"] = variants;
  doc["trials"] = spec.trials;
  doc["seed"] = spec.seed;
  doc["tau_db"] = spec.tau_db;
  doc["inner_trials"] = spec.inner_trials;
  doc["varrho"] = spec.varrho;
  doc["workers"] = spec.workers;
  doc["output_dir"] = config.output_dir;
  doc["output_format"] = config.output_format;
  return doc.dump(2) + "\n";
}

}  // namespace irsbf
