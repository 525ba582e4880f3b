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

#include "irsbf/selfcheck.hpp"

#include "irsbf/analysis.hpp"
#include "irsbf/simharness.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace irsbf {

namespace {

CVec random_complex(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVec v(n);
  for (int i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = cd{re, im};
  }
  return v;
}

ChannelRealization random_realization(int k_count, int m, int n, Rng& rng) {
  std::uniform_real_distribution<double> angle(-kPi / 2, kPi / 2);
  ChannelRealization r;
  for (int k = 0; k < k_count; ++k) {
    RankOneChannel ch;
    ch.gain = random_complex(1, rng)(0);
    const double az = angle(rng);
    const double el = angle(rng) / 2;
    const double dep = angle(rng);
    ch.irs_response = ura_response(m, 1, az, el);
    ch.bs_response = ula_response(n, dep).conjugate();
    r.bs_irs.push_back(std::move(ch));
    r.irs_user.push_back(random_complex(m, rng));
  }
  return r;
}

SystemConfig small_config(int k_count, PhaseResolution res) {
  SystemConfig cfg;
  cfg.irs_count = k_count;
  cfg.tx_power_dbm = 30.0;
  cfg.resolution = res;
  return cfg;
}

// K = 1 instance whose continuous phases sit at +step/2 + eps and 2pi - eps;
// a non-circular quantizer spreads the resulting errors over 3 steps / 2.
ChannelRealization wrap_adversary(int bits) {
  const double step = 2.0 * kPi / std::ldexp(1.0, bits);
  const double eps = 1e-3;
  ChannelRealization r;
  RankOneChannel ch;
  ch.gain = 1.0;
  ch.irs_response = CVec::Ones(2) / std::sqrt(2.0);
  ch.bs_response = CVec::Ones(1);
  r.bs_irs.push_back(ch);
  CVec h(2);
  // g_m = conj(h_m) a_m, continuous phase -arg(g_m) = arg(h_m).
  h(0) = std::polar(1.0, 0.5 * step + eps);
  h(1) = std::polar(1.0, 2.0 * kPi - eps);
  r.irs_user.push_back(h);
  return r;
}

CheckResult check(const std::string& name, const std::function<std::string()>& body) {
  try {
    const std::string failure = body();
    return {name, failure.empty(), failure};
  } catch (const std::exception& e) {
    return {name, false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

std::vector<CheckResult> run_selfcheck(QuantizerMetric metric) {
  std::vector<CheckResult> out;

  out.push_back(check("alignment optimality", [] {
    Rng rng(11);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    for (int rep = 0; rep < 20; ++rep) {
      const CVec g = random_complex(6, rng);
      const double best = std::abs((optimal_continuous_phases(g).unit_vector().transpose() * g)(0, 0));
      if (std::abs(best - g.cwiseAbs().sum()) > 1e-12 * best) return std::string("theta^T g != ||g||_1");
      for (int i = 0; i < 500; ++i) {
        CVec u(6);
        for (int m = 0; m < 6; ++m) u(m) = std::polar(1.0, phase(rng));
        if (std::abs((u.transpose() * g)(0, 0)) > best * (1 + 1e-12)) return std::string("dominated");
      }
    }
    return std::string();
  }));

  out.push_back(check("quantizer wrap-around", [metric] {
    const auto q = quantize_phases(PhaseConfig::continuous({2.0 * kPi - 0.01}), 2, metric);
    return q.indices()[0] == 0 ? std::string() : "2pi-0.01 mapped to index " + std::to_string(q.indices()[0]);
  }));

  out.push_back(check("quantizer nearest point", [metric] {
    const auto q = quantize_phases(PhaseConfig::continuous({0.9 * kPi, 0.0}), 1, metric);
    return q.indices()[0] == 1 && q.indices()[1] == 0 ? std::string() : std::string("wrong index");
  }));

  out.push_back(check("quantization error bound", [metric] {
    Rng rng(12);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    for (int b = 1; b <= 4; ++b) {
      std::vector<double> theta(2000);
      for (auto& t : theta) t = phase(rng);
      const auto c = PhaseConfig::continuous(theta);
      const auto errs = quantization_errors(c, quantize_phases(c, b, metric));
      const double limit = kPi / std::ldexp(1.0, b) + 1e-12;
      for (const double e : errs) {
        if (std::abs(e) > limit) return "b=" + std::to_string(b) + " error " + std::to_string(e);
      }
    }
    return std::string();
  }));

  out.push_back(check("single-IRS quantization sandwich", [metric] {
    Rng rng(13);
    for (int b = 1; b <= 3; ++b) {
      const double factor = std::pow(std::cos(kPi / std::ldexp(1.0, b)), 2);
      std::vector<ChannelRealization> cases{wrap_adversary(b)};
      for (int i = 0; i < 300; ++i) cases.push_back(random_realization(1, 8, 4, rng));
      for (const auto& r : cases) {
        const int n = static_cast<int>(r.bs_irs[0].bs_response.size());
        auto cfg = small_config(1, PhaseResolution::continuous());
        cfg.bs_antennas = n;
        const double cont = solve_joint(r, cfg, metric).gamma;
        cfg.resolution = PhaseResolution::bits(b);
        const double disc = solve_joint(r, cfg, metric).gamma;
        if (disc < factor * cont * (1 - 1e-12)) return "violated at b=" + std::to_string(b);
      }
    }
    return std::string();
  }));

  out.push_back(check("eta closed form", [] {
    const double expected[] = {0.4053, 0.8106, 0.9496};
    for (int b = 1; b <= 3; ++b) {
      if (std::abs(eta(b) - expected[b - 1]) > 5e-5) return "eta(" + std::to_string(b) + ")";
    }
    if (std::abs(eta_db(1) + 3.9224) > 5e-5 || std::abs(eta_db(2) + 0.9121) > 5e-5) {
      return std::string("eta in dB");
    }
    return std::string();
  }));

  out.push_back(check("eta equals squared mean phase factor", [] {
    for (int b = 1; b <= 16; ++b) {
      const double f = mean_phase_factor(b);
      if (std::abs(eta(b) - f * f) > 1e-15) return "b=" + std::to_string(b);
    }
    return std::string();
  }));

  out.push_back(check("eta strictly increasing", [] {
    for (int b = 1; b < 16; ++b) {
      if (!(eta(b + 1) > eta(b))) return "b=" + std::to_string(b);
    }
    return std::string();
  }));

  out.push_back(check("MRT power budget", [] {
    Rng rng(14);
    for (int i = 0; i < 100; ++i) {
      const CVec row = random_complex(8, rng);
      const double p = 0.5 + i;
      const CVec w = mrt(row, p);
      if (std::abs(w.squaredNorm() - p) > 1e-9 * p) return std::string("||w||^2 != p");
      if (std::abs(std::norm((row.transpose() * w)(0, 0)) - p * row.squaredNorm()) > 1e-9 * p * row.squaredNorm()) {
        return std::string("|h w|^2 != p ||h||^2");
      }
    }
    return std::string();
  }));

  out.push_back(check("oracle ordering", [metric] {
    Rng rng(15);
    for (int i = 0; i < 40; ++i) {
      const int k_count = 1 + i % 3;
      const int m = 1 + (i / 3) % 3;
      const auto r = random_realization(k_count, m, 4, rng);
      auto cfg = small_config(k_count, PhaseResolution::bits(1 + i % 2));
      cfg.bs_antennas = 4;
      const double heur = solve_joint(r, cfg, metric).gamma;
      const double brute = brute_force_discrete(r, cfg).gamma;
      const double bound = upper_bound_power(r, cfg);
      if (heur > brute * (1 + 1e-9) || brute > bound) return "instance " + std::to_string(i);
    }
    return std::string();
  }));

  out.push_back(check("precoder phase invariance", [] {
    Rng rng(16);
    const auto r = random_realization(2, 4, 6, rng);
    auto cfg = small_config(2, PhaseResolution::bits(2));
    cfg.bs_antennas = 6;
    const auto sol = solve_joint(r, cfg);
    const double rotated = receive_power(r, std::polar(1.0, 1.234) * sol.precoder, sol.phases);
    return std::abs(rotated - sol.gamma) <= 1e-12 * sol.gamma ? std::string() : std::string("changed");
  }));

  out.push_back(check("seeded channel reproducibility", [] {
    SystemConfig cfg;
    const ScenarioGeometry geom;
    const auto a = draw_geometric_realization(cfg, geom, 99, 7);
    const auto b = draw_geometric_realization(cfg, geom, 99, 7);
    for (std::size_t k = 0; k < a.bs_irs.size(); ++k) {
      if (a.bs_irs[k].gain != b.bs_irs[k].gain || a.irs_user[k] != b.irs_user[k]) {
        return std::string("differs");
      }
    }
    return std::string();
  }));

  return out;
}

}  // namespace irsbf
