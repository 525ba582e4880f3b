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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "irsbf/config.hpp"
#include "irsbf/selfcheck.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace irsbf;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("irsbf_test_config_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("empty document gives the default scenario") {
  for (const std::string text : {"", "  \n", "{}"}) {
    const auto rc = parse_config(text);
    const auto& s = rc.spec;
    CHECK(s.kind == ExperimentKind::snr_vs_distance);
    CHECK(s.cfg.bs_antennas == 32);
    CHECK(s.cfg.elements_y == 10);
    CHECK(s.cfg.elements_z == 5);
    CHECK(s.cfg.tx_power_dbm == 30.0);
    CHECK(s.cfg.noise_dbm == -85.0);
    CHECK(s.cfg.irs_count == 3);
    CHECK(s.cfg.resolution == PhaseResolution::bits(2));
    CHECK(s.geom.bs_to_first_irs == 11.0);
    CHECK(s.geom.vertical_offset == 1.5);
    CHECK(s.geom.irs_span == 50.0);
    CHECK(s.geom.bs_to_user == 41.0);
    CHECK(s.tau_db == 1.5);
    CHECK(s.trials == 1000);
    CHECK(s.inner_trials == 200);
    CHECK(s.sweep.size() == 31);
    CHECK(rc.output_format == "csv");
  }
  CHECK(parse_config(R"({"experiment": "outage_vs_blockage"})").spec.geom.bs_to_user == 61.0);
}

TEST_CASE("field parsing") {
  const auto rc = parse_config(R"({"experiment": "snr_vs_elements", "K": 5, "b": "continuous",
                                  "sweep": [5, 20], "variants": ["b1", "continuous"], "seed": 9})");
  CHECK(rc.spec.kind == ExperimentKind::snr_vs_elements);
  CHECK(rc.spec.cfg.irs_count == 5);
  CHECK(rc.spec.cfg.resolution.is_continuous());
  CHECK(rc.spec.sweep == std::vector<double>{5.0, 20.0});
  CHECK(rc.spec.variants == std::vector<Variant>{Variant::proposed(1), Variant::continuous()});
  CHECK(rc.spec.seed == 9u);
  CHECK(parse_config(R"({"experiment": "outage_vs_blockage", "b": 3})").spec.variants.front() ==
        Variant::proposed(3));
}

TEST_CASE("validation errors name the field") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"b": 0})"), doctest::Contains("b must be >= 1 or 'continuous'"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"trials": -1})"), doctest::Contains("trials"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"bogus": 1})"), doctest::Contains("unknown key 'bogus'"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"N": "many"})"), doctest::Contains("'N'"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"M_z": 0})"), doctest::Contains("validation error"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"sweep": [30, 20]})"), doctest::Contains("increasing"),
                       ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"variants": ["mrt"]})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"experiment": "fig9"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"output_format": "xml"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"seed": -4})"), ConfigError);
}

TEST_CASE("parse errors carry line information") {
  const std::string text = "{\n  \"K\": 3,\n  \"N\": ,\n}";
  CHECK_THROWS_WITH_AS(parse_config(text), doctest::Contains("line 3"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[1, 2]"), doctest::Contains("parse error"), ConfigError);
}

TEST_CASE("overrides") {
  const auto rc = parse_config(R"({"K": 3})", {"K=5", "b=continuous", "sweep=[20,30]"});
  CHECK(rc.spec.cfg.irs_count == 5);
  CHECK(rc.spec.cfg.resolution.is_continuous());
  CHECK(rc.spec.sweep.size() == 2);
  CHECK_THROWS_AS(parse_config("", {"novalue"}), ConfigError);
  CHECK_THROWS_AS(parse_config("", {"unknown=1"}), ConfigError);
}

TEST_CASE("resolved config reproduces the experiment") {
  const auto rc = parse_config(R"({"experiment": "snr_vs_elements", "sweep": [5, 10], "trials": 7,
                                  "seed": 18446744073709551615, "d_v": 2.25, "freeze_shadowing": true})");
  const auto again = parse_config(resolved_config_text(rc));
  CHECK(resolved_config_text(again) == resolved_config_text(rc));
  CHECK(again.spec.seed == rc.spec.seed);
  CHECK(again.spec.geom.vertical_offset == 2.25);
  CHECK(again.spec.cfg.freeze_shadowing);
  CHECK(format_csv(run_experiment(again.spec)) == format_csv(run_experiment(rc.spec)));
}

TEST_CASE("CSV schema") {
  ExperimentResult r{ExperimentKind::snr_vs_distance,
                     {{15.0, "b2", 3.141592653589793, 0.1, 10}, {17.0, "no_irs", -1e-7, 2.5e10, 10}}};
  const std::string text = format_csv(r);
  CHECK(text.rfind("# snr_vs_distance", 0) == 0);
  CHECK(text.find("\nx,variant,value,std,trials\n") != std::string::npos);
  CHECK(text.find("15,b2,3.141592653589793,0.1,10\n") != std::string::npos);
  const auto rows = parse_csv(text);
  REQUIRE(rows.size() == 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].x == r.rows[i].x);
    CHECK(rows[i].variant == r.rows[i].variant);
    CHECK(rows[i].value == r.rows[i].value);
    CHECK(rows[i].std == r.rows[i].std);
    CHECK(rows[i].trials == r.rows[i].trials);
  }
  CHECK_THROWS(parse_csv("a,b\n1,2\n"));
  CHECK_THROWS(parse_csv("x,variant,value,std,trials\n1,b2,zz,0,1\n"));
}

TEST_CASE("run writes CSV and sidecar") {
  const auto dir = scratch_dir("run");
  auto rc = parse_config(R"({"experiment": "snr_vs_elements", "sweep": [5, 10, 20], "trials": 20})");
  rc.output_dir = dir.string();
  const auto out = run(rc);
  CHECK(out.csv_path == dir / "snr_vs_elements.csv");
  const auto rows = parse_csv(slurp(out.csv_path));
  CHECK(rows.size() == 3 * 3);
  CHECK(rows.front().x == 50.0);
  CHECK(rows.back().x == 200.0);
  const auto meta = parse_config(slurp(out.metadata_path));
  CHECK(resolved_config_text(meta) == resolved_config_text(rc));

  const std::string first = slurp(out.csv_path);
  run(rc);
  CHECK(slurp(out.csv_path) == first);
  fs::remove_all(dir);
}

TEST_CASE("eta_validation run reports eta") {
  const auto dir = scratch_dir("eta");
  auto rc = parse_config(R"({"experiment": "eta_validation", "M_z": 10, "trials": 1000})");
  rc.output_dir = dir.string();
  const auto rows = parse_csv(slurp(run(rc).csv_path));
  REQUIRE(rows.size() == 6);
  for (const auto& row : rows) {
    if (row.variant == "empirical") CHECK(std::abs(row.value - eta(static_cast<int>(row.x))) < 0.03);
  }
  fs::remove_all(dir);
}

TEST_CASE("I/O failures name the path") {
  const auto dir = scratch_dir("io");
  fs::create_directories(dir);
  const auto blocker = dir / "file";
  std::ofstream(blocker) << "x";
  auto rc = parse_config(R"({"experiment": "eta_validation", "trials": 2, "M_z": 1})");
  rc.output_dir = (blocker / "sub").string();
  CHECK_THROWS_WITH(run(rc), doctest::Contains("file"));
  fs::remove_all(dir);
}

TEST_CASE("selfcheck") {
  const auto ok = run_selfcheck();
  CHECK(ok.size() >= 8);
  for (const auto& c : ok) CHECK_MESSAGE(c.passed, c.name << ": " << c.detail);

  bool sandwich_failed = false;
  for (const auto& c : run_selfcheck(QuantizerMetric::linear)) {
    if (c.name.find("sandwich") != std::string::npos && !c.passed) sandwich_failed = true;
  }
  CHECK(sandwich_failed);
}
