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


// Acceptance suite: one [PASS]/[FAIL] line per criterion, nonzero exit if
// any criterion fails. All tolerances are fixed below.

#include "irsbf/analysis.hpp"
#include "irsbf/beamformer.hpp"
#include "irsbf/config.hpp"
#include "irsbf/simharness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace irsbf;

namespace {

int workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

// AC1: eta(b) reproduced by the eta_validation experiment.
Outcome eta_reproduction() {
  ExperimentSpec s;
  s.kind = ExperimentKind::eta_validation;
  s.cfg.irs_count = 3;
  s.cfg.bs_antennas = 32;
  s.cfg.elements_y = 16;
  s.cfg.elements_z = 16;
  s.sweep = {1.0, 2.0, 3.0};
  s.trials = 10000;
  s.workers = workers();
  const auto r = run_eta_validation(s);
  const double tol[] = {0.03, 0.03, 0.02};
  const double target[] = {0.4053, 0.8106, 0.9496};
  Outcome o{true, ""};
  for (int b = 1; b <= 3; ++b) {
    const double v = r.find(b, "empirical").value;
    o.pass = o.pass && std::abs(v - target[b - 1]) <= tol[b - 1];
    o.detail += "b" + std::to_string(b) + "=" + fmt("%.4f", v) + " ";
  }
  return o;
}

ExperimentResult elements_sweep() {
  ExperimentSpec s;
  s.kind = ExperimentKind::snr_vs_elements;
  s.cfg.irs_count = 3;
  s.geom.bs_to_user = 41.0;
  s.sweep = {5.0, 10.0, 20.0};
  s.trials = 1000;
  s.variants = {Variant::proposed(1), Variant::proposed(2), Variant::continuous()};
  s.workers = workers();
  return run_snr_vs_elements(s);
}

// AC2: +6.0 +- 0.7 dB per doubling of M for b in {1, 2, inf}.
Outcome quadratic_scaling(const ExperimentResult& r) {
  Outcome o{true, ""};
  for (const std::string v : {"b1", "b2", "continuous"}) {
    for (const auto [lo, hi] : {std::pair{50.0, 100.0}, std::pair{100.0, 200.0}}) {
      const double d = r.find(hi, v).value - r.find(lo, v).value;
      o.pass = o.pass && std::abs(d - 6.0) <= 0.7;
      o.detail += v + "(" + fmt("%.0f", lo) + "->" + fmt("%.0f", hi) + ")=" + fmt("%.2f", d) + " ";
    }
  }
  return o;
}

// AC3: quantization gaps at M = 200.
Outcome quantization_gaps(const ExperimentResult& r) {
  const double cont = r.find(200.0, "continuous").value;
  const double g1 = cont - r.find(200.0, "b1").value;
  const double g2 = cont - r.find(200.0, "b2").value;
  return {std::abs(g1 - 3.92) <= 0.4 && std::abs(g2 - 0.91) <= 0.3,
          "gap1=" + fmt("%.3f", g1) + " dB gap2=" + fmt("%.3f", g2) + " dB"};
}

cd cn(Rng& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  return {n(rng), n(rng)};
}

// AC4: oracle sandwich on random small instances. The floor on the mean
// solve_joint / brute-force ratio was calibrated on seeds 1000..1009 of this
// same instance distribution (means 0.839..0.871) and frozen below the
// smallest of them.
constexpr double kNearOptimalFloor = 0.82;

Outcome oracle_sandwich() {
  Rng rng(derive_seed(4, {}));
  std::uniform_real_distribution<double> ang(-kPi / 2, kPi / 2);
  int violations = 0;
  double ratio_sum = 0.0;
  double worst_floor = 1.0;
  const int instances = 500;
  for (int t = 0; t < instances; ++t) {
    int k, m, b;
    do {
      k = std::uniform_int_distribution<int>(1, 3)(rng);
      m = std::uniform_int_distribution<int>(1, 6)(rng);
      b = std::uniform_int_distribution<int>(1, 2)(rng);
    } while (b * k * m > 20);
    SystemConfig cfg;
    cfg.irs_count = k;
    cfg.elements_y = m;
    cfg.elements_z = 1;
    cfg.bs_antennas = 8;
    cfg.resolution = PhaseResolution::bits(b);
    worst_floor = std::min(worst_floor, std::pow(std::cos(kPi / (1 << b)), 2) * 0.95);
    ChannelRealization r;
    for (int i = 0; i < k; ++i) {
      RankOneChannel ch;
      ch.gain = cn(rng);
      ch.irs_response = ura_response(m, 1, ang(rng), 0.0);
      ch.bs_response = ula_response(cfg.bs_antennas, ang(rng)).conjugate();
      CVec h(m);
      for (int e = 0; e < m; ++e) h(e) = cn(rng);
      r.bs_irs.push_back(ch);
      r.irs_user.push_back(h);
    }
    const double sj = solve_joint(r, cfg).gamma;
    const double bf = brute_force_discrete(r, cfg).gamma;
    const double ub = upper_bound_power(r, cfg);
    if (sj > bf * (1.0 + 1e-12) || bf > ub) ++violations;
    ratio_sum += sj / bf;
  }
  const double avg = ratio_sum / instances;
  return {violations == 0 && avg >= kNearOptimalFloor && kNearOptimalFloor >= worst_floor,
          "violations=" + std::to_string(violations) + " mean ratio=" + fmt("%.4f", avg) +
              " floor=" + fmt("%.2f", kNearOptimalFloor)};
}

// AC5: deterministic single-IRS sandwich.
Outcome single_irs_sandwich() {
  SystemConfig cfg;
  cfg.irs_count = 1;
  ScenarioGeometry geom;
  int violations = 0;
  double tightest = 1e9;
  std::uniform_real_distribution<double> du(15.0, 75.0);
  Rng pos(derive_seed(5, {}));
  for (std::uint64_t t = 0; t < 10000; ++t) {
    geom.bs_to_user = du(pos);
    const auto r = draw_geometric_realization(cfg, geom, derive_seed(5, {t}), derive_seed(5, {t, 1}));
    SystemConfig c = cfg;
    c.resolution = PhaseResolution::continuous();
    const double cont = solve_joint(r, c).gamma;
    for (int b = 1; b <= 3; ++b) {
      c.resolution = PhaseResolution::bits(b);
      const double disc = solve_joint(r, c).gamma;
      const double floor = std::pow(std::cos(kPi / (1 << b)), 2) * cont;
      if (disc < floor * (1.0 - 1e-12)) ++violations;
      if (floor > 0.0) tightest = std::min(tightest, disc / floor);
    }
  }
  return {violations == 0,
          "violations=" + std::to_string(violations) + " min disc/floor=" + fmt("%.4f", tightest)};
}

// AC6: harvested quantizer errors have the predicted mean and are uniform.
Outcome mean_phase_factor_check() {
  SystemConfig cfg;
  cfg.irs_count = 1;
  const int m = 50;
  const int realizations = 2000;  // 2000 x 50 = 1e5 samples
  Outcome o{true, ""};
  for (int b = 1; b <= 3; ++b) {
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(m) * realizations);
    for (int t = 0; t < realizations; ++t) {
      Rng rng(derive_seed(6, {static_cast<std::uint64_t>(t)}));
      std::uniform_real_distribution<double> ang(-kPi / 2, kPi / 2);
      RankOneChannel ch;
      ch.gain = cn(rng);
      ch.irs_response = ura_response(10, 5, ang(rng), 0.0);
      ch.bs_response = ula_response(32, ang(rng)).conjugate();
      const CVec h = gen_rayleigh_irs_user(m, 1.0, rng);
      const auto cont = optimal_continuous_phases(effective_gain_vector(ch, h));
      const auto err = quantization_errors(cont, quantize_phases(cont, b));
      samples.insert(samples.end(), err.begin(), err.end());
    }
    const auto st = discretization_error_stats(samples, b);
    const double dev = std::abs(st.mean - std::complex<double>(mean_phase_factor(b), 0.0));
    o.pass = o.pass && dev <= 0.01 && st.ks_passes() && st.samples == 100000;
    o.detail += "b" + std::to_string(b) + ": |dev|=" + fmt("%.4f", dev) + " KS=" +
                fmt("%.4f", st.ks_statistic) + "/" + fmt("%.4f", st.ks_critical_1pct) + " ";
  }
  return o;
}

// AC7: closed-form average power versus Monte Carlo at K = 1, M = 256.
Outcome theory_vs_simulation() {
  Outcome o{true, ""};
  for (int b = 1; b <= 3; ++b) {
    ScalingLawParams p;
    p.bs_antennas = 32;
    p.elements = 256;
    p.varrho = {1.0};
    p.rho2 = {1.0};
    p.resolution = PhaseResolution::bits(b);
    const double theory = theoretical_gamma(p);
    const double mc = monte_carlo_gamma(p, 10000, derive_seed(7, {static_cast<std::uint64_t>(b)})).mean;
    const double rel = std::abs(mc - theory) / theory;
    o.pass = o.pass && rel <= 0.05;
    o.detail += "b" + std::to_string(b) + " rel=" + fmt("%.4f", rel) + " ";
  }
  return o;
}

// AC8: outage monotone in P and non-increasing in K.
Outcome outage_behavior() {
  std::vector<ExperimentResult> curves;
  const int patterns = 1000;
  for (const int k : {1, 3, 5}) {
    ExperimentSpec s;
    s.kind = ExperimentKind::outage_vs_blockage;
    s.cfg.irs_count = k;
    s.geom.bs_to_user = 61.0;
    s.sweep = default_sweep(s.kind);
    s.trials = patterns;
    s.inner_trials = 200;
    s.tau_db = 1.5;
    s.variants = {Variant::proposed(2)};
    s.workers = workers();
    curves.push_back(run_outage(s));
  }
  Outcome o{true, ""};
  int p_violations = 0;
  int k_violations = 0;
  for (const auto& c : curves) {
    for (std::size_t i = 1; i < c.rows.size(); ++i) {
      if (c.rows[i].value < c.rows[i - 1].value) ++p_violations;
    }
  }
  for (std::size_t a = 0; a + 1 < curves.size(); ++a) {
    for (std::size_t i = 0; i < curves[a].rows.size(); ++i) {
      const auto& fewer = curves[a].rows[i];
      const auto& more = curves[a + 1].rows[i];
      const double se = std::sqrt((fewer.std * fewer.std + more.std * more.std) / patterns);
      if (more.value > fewer.value + se) ++k_violations;
    }
  }
  o.pass = p_violations == 0 && k_violations == 0;
  o.detail = "P-order violations=" + std::to_string(p_violations) +
             " K-order violations=" + std::to_string(k_violations) + " | P=0.5: K1=" +
             fmt("%.3f", curves[0].rows[5].value) + " K3=" + fmt("%.3f", curves[1].rows[5].value) +
             " K5=" + fmt("%.3f", curves[2].rows[5].value);
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// AC9: byte-identical CSV on rerun, including a rerun from the sidecar.
Outcome reproducibility() {
  const auto root = std::filesystem::temp_directory_path() / "irsbf_acceptance_repro";
  std::filesystem::remove_all(root);
  const std::vector<std::string> configs = {
      R"({"experiment": "snr_vs_distance", "sweep": [21, 41, 61], "trials": 40})",
      R"({"experiment": "snr_vs_elements", "sweep": [5, 10], "trials": 40})",
      R"({"experiment": "eta_validation", "M_z": 10, "trials": 200})",
      R"({"experiment": "outage_vs_blockage", "trials": 20, "inner_trials": 20, "sweep": [0, 0.5, 1]})"};
  int mismatches = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    auto rc = parse_config(configs[i]);
    rc.output_dir = (root / ("a" + std::to_string(i))).string();
    const auto first = run(rc);
    rc.output_dir = (root / ("b" + std::to_string(i))).string();
    const auto second = run(rc);
    auto from_sidecar = parse_config(slurp(first.metadata_path));
    from_sidecar.output_dir = (root / ("c" + std::to_string(i))).string();
    from_sidecar.spec.workers = workers();
    const auto third = run(from_sidecar);
    const std::string body = slurp(first.csv_path);
    if (body.empty() || body != slurp(second.csv_path) || body != slurp(third.csv_path)) ++mismatches;
  }
  std::filesystem::remove_all(root);
  return {mismatches == 0, "experiments=" + std::to_string(configs.size()) +
                               " mismatches=" + std::to_string(mismatches)};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const char* id, const char* name, const std::function<Outcome()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("[%s] %s %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
    std::fflush(stdout);
  };

  report("AC1", "eta reproduction", eta_reproduction);
  const auto elements = elements_sweep();
  report("AC2", "quadratic scaling", [&] { return quadratic_scaling(elements); });
  report("AC3", "quantization gaps", [&] { return quantization_gaps(elements); });
  report("AC4", "oracle sandwich", oracle_sandwich);
  report("AC5", "single-IRS sandwich", single_irs_sandwich);
  report("AC6", "mean phase factor", mean_phase_factor_check);
  report("AC7", "theory vs simulation", theory_vs_simulation);
  report("AC8", "outage behavior", outage_behavior);
  report("AC9", "reproducibility", reproducibility);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
