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

#include "irsbf/simharness.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace irsbf {

namespace {

// Stream tags keep the key spaces of derive_seed disjoint.
constexpr std::uint64_t kTagBsIrs = 1;
constexpr std::uint64_t kTagIrsUser = 2;
constexpr std::uint64_t kTagDirect = 3;
constexpr std::uint64_t kTagShadow = 0x5348414430ULL;
constexpr std::uint64_t kTagPattern = 0x504154544552ULL;
constexpr std::uint64_t kTagInner = 0x494E4E4552ULL;

double to_db(double linear) { return 10.0 * std::log10(linear); }

// Streams of an IRS are keyed by its position (micrometres), so the same
// physical IRS sees the same fading and blockage draws whatever K is.
std::uint64_t irs_key(const ScenarioGeometry& geom, int irs_count, int k) {
  const double x = geom.irs_positions(irs_count)[static_cast<std::size_t>(k)];
  return static_cast<std::uint64_t>(std::llround(x * 1e6));
}

std::uint64_t shadow_seed_for(const ExperimentSpec& spec) {
  return derive_seed(spec.seed, {kTagShadow});
}

double variant_power(const Variant& v, const ChannelRealization& r, const SystemConfig& cfg) {
  switch (v.kind) {
    case Variant::Kind::proposed: {
      SystemConfig c = cfg;
      c.resolution = PhaseResolution::bits(v.bits);
      return solve_joint(r, c).gamma;
    }
    case Variant::Kind::continuous: {
      SystemConfig c = cfg;
      c.resolution = PhaseResolution::continuous();
      return solve_joint(r, c).gamma;
    }
    case Variant::Kind::upper_bound:
      return upper_bound_power(r, cfg);
    case Variant::Kind::no_irs:
      if (!r.direct) throw std::logic_error("no_irs variant needs a direct channel");
      return cfg.tx_power_w() * r.direct->squaredNorm();
  }
  throw std::logic_error("unknown variant");
}

// Shared driver for the two SNR sweeps: `adjust` maps a sweep value onto the
// configuration and returns the x value to report.
template <typename Adjust>
ExperimentResult run_snr_sweep(const ExperimentSpec& spec, Adjust adjust) {
  spec.validate();
  ExperimentResult result{spec.kind, {}};
  const auto nv = spec.variants.size();
  for (std::size_t xi = 0; xi < spec.sweep.size(); ++xi) {
    SystemConfig cfg = spec.cfg;
    ScenarioGeometry geom = spec.geom;
    const double x = adjust(spec.sweep[xi], cfg, geom);
    std::vector<std::vector<double>> snr(nv, std::vector<double>(static_cast<std::size_t>(spec.trials)));
    parallel_trials(spec.trials, spec.workers, [&](int t) {
      const auto seed = derive_seed(spec.seed, {xi, static_cast<std::uint64_t>(t)});
      const auto r = draw_geometric_realization(cfg, geom, seed, shadow_seed_for(spec));
      for (std::size_t v = 0; v < nv; ++v) {
        snr[v][static_cast<std::size_t>(t)] = to_db(variant_power(spec.variants[v], r, cfg) / cfg.noise_w());
      }
    });
    for (std::size_t v = 0; v < nv; ++v) {
      const auto s = aggregate(snr[v]);
      result.rows.push_back({x, spec.variants[v].name(), s.mean, s.std, s.count});
    }
  }
  return result;
}

ChannelRealization subset(const ChannelRealization& r, const std::vector<bool>& keep) {
  ChannelRealization out;
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (!keep[k]) continue;
    out.bs_irs.push_back(r.bs_irs[k]);
    out.irs_user.push_back(r.irs_user[k]);
  }
  return out;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::snr_vs_distance: return "snr_vs_distance";
    case ExperimentKind::snr_vs_elements: return "snr_vs_elements";
    case ExperimentKind::eta_validation: return "eta_validation";
    case ExperimentKind::outage_vs_blockage: return "outage_vs_blockage";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& text) {
  for (const auto k : {ExperimentKind::snr_vs_distance, ExperimentKind::snr_vs_elements,
                       ExperimentKind::eta_validation, ExperimentKind::outage_vs_blockage}) {
    if (to_string(k) == text) return k;
  }
  throw std::invalid_argument("unknown experiment kind '" + text + "'");
}

std::string Variant::name() const {
  switch (kind) {
    case Kind::proposed: return "b" + std::to_string(bits);
    case Kind::continuous: return "continuous";
    case Kind::upper_bound: return "upper_bound";
    case Kind::no_irs: return "no_irs";
  }
  return "unknown";
}

Variant Variant::parse(const std::string& text) {
  if (text == "continuous") return continuous();
  if (text == "upper_bound") return upper_bound();
  if (text == "no_irs") return no_irs();
  if (text.size() > 1 && text[0] == 'b') {
    const auto r = PhaseResolution::parse(text.substr(1));
    if (!r.is_continuous()) return proposed(r.bit_count());
  }
  throw std::invalid_argument("unknown variant '" + text + "'");
}

void ExperimentSpec::validate() const {
  cfg.validate();
  geom.validate();
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (sweep.empty()) throw std::invalid_argument("sweep must be non-empty");
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    if (!(sweep[i] > sweep[i - 1])) throw std::invalid_argument("sweep must be strictly increasing");
  }
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (inner_trials < 1) throw std::invalid_argument("inner_trials must be >= 1");
  if (!(varrho > 0.0)) throw std::invalid_argument("varrho must be > 0");
  switch (kind) {
    case ExperimentKind::snr_vs_distance:
      for (const double x : sweep) {
        if (!(x > 0.0)) throw std::invalid_argument("sweep: d_u must be > 0");
      }
      break;
    case ExperimentKind::snr_vs_elements:
      for (const double x : sweep) {
        if (x < 1.0 || x != std::floor(x)) throw std::invalid_argument("sweep: M_z must be a positive integer");
      }
      break;
    case ExperimentKind::eta_validation:
      for (const double x : sweep) {
        if (x < 1.0 || x > 30.0 || x != std::floor(x)) throw std::invalid_argument("sweep: bits must be integers in [1, 30]");
      }
      break;
    case ExperimentKind::outage_vs_blockage:
      for (const double x : sweep) {
        if (x < 0.0 || x > 1.0) throw std::invalid_argument("sweep: blockage probability must be in [0, 1]");
      }
      break;
  }
  if ((kind == ExperimentKind::snr_vs_distance || kind == ExperimentKind::snr_vs_elements) &&
      variants.empty()) {
    throw std::invalid_argument("variants must be non-empty");
  }
}

const ResultRow& ExperimentResult::find(double x, const std::string& variant) const {
  for (const auto& r : rows) {
    if (r.x == x && r.variant == variant) return r;
  }
  throw std::out_of_range("no row for x=" + std::to_string(x) + " variant=" + variant);
}

Summary aggregate(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("aggregate: empty input");
  double sum = 0.0;
  for (const double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  const double std = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
  return {mean, std, static_cast<int>(values.size())};
}

ChannelRealization draw_geometric_realization(const SystemConfig& cfg, const ScenarioGeometry& geom,
                                              std::uint64_t trial_seed, std::uint64_t shadow_seed) {
  ChannelRealization r;
  const int k_count = cfg.irs_count;
  for (int k = 0; k < k_count; ++k) {
    const auto kk = irs_key(geom, k_count, k);
    const auto link = bs_irs_link(geom, k_count, k);
    Rng bs_rng(derive_seed(trial_seed, {kTagBsIrs, kk}));
    Rng bs_shadow(derive_seed(shadow_seed, {kTagBsIrs, kk}));
    r.bs_irs.push_back(gen_bs_irs_channel(cfg, link.angles, link.distance, bs_rng,
                                          cfg.freeze_shadowing ? &bs_shadow : nullptr));
    Rng user_rng(derive_seed(trial_seed, {kTagIrsUser, kk}));
    Rng user_shadow(derive_seed(shadow_seed, {kTagIrsUser, kk}));
    r.irs_user.push_back(gen_irs_user_channel(cfg, cfg.paths, irs_user_distance(geom, k_count, k),
                                              user_rng, cfg.freeze_shadowing ? &user_shadow : nullptr));
  }
  Rng direct_rng(derive_seed(trial_seed, {kTagDirect}));
  Rng direct_shadow(derive_seed(shadow_seed, {kTagDirect}));
  r.direct = gen_direct_channel(cfg, cfg.paths, geom.bs_to_user, direct_rng,
                                cfg.freeze_shadowing ? &direct_shadow : nullptr);
  return r;
}

ExperimentResult run_snr_vs_distance(const ExperimentSpec& spec) {
  if (spec.kind != ExperimentKind::snr_vs_distance) throw std::invalid_argument("spec kind is not snr_vs_distance");
  return run_snr_sweep(spec, [](double x, SystemConfig&, ScenarioGeometry& geom) {
    geom.bs_to_user = x;
    return x;
  });
}

ExperimentResult run_snr_vs_elements(const ExperimentSpec& spec) {
  if (spec.kind != ExperimentKind::snr_vs_elements) throw std::invalid_argument("spec kind is not snr_vs_elements");
  return run_snr_sweep(spec, [](double x, SystemConfig& cfg, ScenarioGeometry&) {
    cfg.elements_z = static_cast<int>(x);
    return static_cast<double>(cfg.elements());
  });
}

ExperimentResult run_eta_validation(const ExperimentSpec& spec) {
  if (spec.kind != ExperimentKind::eta_validation) throw std::invalid_argument("spec kind is not eta_validation");
  spec.validate();
  const auto& cfg = spec.cfg;
  const auto nb = spec.sweep.size();
  const auto trials = static_cast<std::size_t>(spec.trials);
  std::vector<double> continuous(trials);
  std::vector<std::vector<double>> quantized(nb, std::vector<double>(trials));

  parallel_trials(spec.trials, spec.workers, [&](int t) {
    const auto seed = derive_seed(spec.seed, {static_cast<std::uint64_t>(t)});
    ChannelRealization r;
    for (int k = 0; k < cfg.irs_count; ++k) {
      const auto kk = irs_key(spec.geom, cfg.irs_count, k);
      const auto link = bs_irs_link(spec.geom, cfg.irs_count, k);
      Rng bs_rng(derive_seed(seed, {kTagBsIrs, kk}));
      Rng bs_shadow(derive_seed(shadow_seed_for(spec), {kTagBsIrs, kk}));
      r.bs_irs.push_back(gen_bs_irs_channel(cfg, link.angles, link.distance, bs_rng,
                                            cfg.freeze_shadowing ? &bs_shadow : nullptr));
      Rng user_rng(derive_seed(seed, {kTagIrsUser, kk}));
      r.irs_user.push_back(gen_rayleigh_irs_user(cfg.elements(), spec.varrho, user_rng));
    }
    const auto ts = static_cast<std::size_t>(t);
    continuous[ts] = variant_power(Variant::continuous(), r, cfg);
    for (std::size_t b = 0; b < nb; ++b) {
      quantized[b][ts] = variant_power(Variant::proposed(static_cast<int>(spec.sweep[b])), r, cfg);
    }
  });

  ExperimentResult result{spec.kind, {}};
  const double mean_cont = aggregate(continuous).mean;
  for (std::size_t b = 0; b < nb; ++b) {
    std::vector<double> ratios(trials);
    for (std::size_t t = 0; t < trials; ++t) ratios[t] = quantized[b][t] / continuous[t];
    const auto per_trial = aggregate(ratios);
    const double x = spec.sweep[b];
    result.rows.push_back({x, "empirical", aggregate(quantized[b]).mean / mean_cont, per_trial.std,
                           spec.trials});
    result.rows.push_back({x, "theory", eta(static_cast<int>(x)), 0.0, spec.trials});
  }
  return result;
}

ExperimentResult run_outage(const ExperimentSpec& spec) {
  if (spec.kind != ExperimentKind::outage_vs_blockage) throw std::invalid_argument("spec kind is not outage_vs_blockage");
  spec.validate();
  const Variant variant =
      spec.variants.empty()
          ? (spec.cfg.resolution.is_continuous() ? Variant::continuous()
                                                 : Variant::proposed(spec.cfg.resolution.bit_count()))
          : spec.variants.front();
  SystemConfig cfg = spec.cfg;
  if (variant.kind == Variant::Kind::proposed) {
    cfg.resolution = PhaseResolution::bits(variant.bits);
  } else if (variant.kind == Variant::Kind::continuous) {
    cfg.resolution = PhaseResolution::continuous();
  } else {
    throw std::invalid_argument("outage supports proposed and continuous variants only");
  }
  const auto np = spec.sweep.size();
  const auto k_count = static_cast<std::size_t>(cfg.irs_count);
  std::vector<std::vector<double>> outage(np, std::vector<double>(static_cast<std::size_t>(spec.trials)));

  // The blockage pattern of trial t at probability P is {k : u_k < P} with u_k
  // shared across the sweep, so patterns are nested as P grows. Inner channel
  // draws are shared across the sweep as well.
  parallel_trials(spec.trials, spec.workers, [&](int t) {
    const auto tt = static_cast<std::uint64_t>(t);
    std::vector<double> u(k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
      Rng pattern_rng(derive_seed(spec.seed, {kTagPattern, tt, irs_key(spec.geom, cfg.irs_count, static_cast<int>(k))}));
      u[k] = std::uniform_real_distribution<double>(0.0, 1.0)(pattern_rng);
    }

    std::vector<std::vector<bool>> masks(np, std::vector<bool>(k_count));
    for (std::size_t p = 0; p < np; ++p) {
      for (std::size_t k = 0; k < k_count; ++k) masks[p][k] = !(u[k] < spec.sweep[p]);
    }
    std::vector<double> rate_sum(np, 0.0);
    for (int i = 0; i < spec.inner_trials; ++i) {
      const auto seed = derive_seed(spec.seed, {kTagInner, tt, static_cast<std::uint64_t>(i)});
      const auto r = draw_geometric_realization(cfg, spec.geom, seed, shadow_seed_for(spec));
      std::map<std::vector<bool>, double> cache;
      for (std::size_t p = 0; p < np; ++p) {
        auto it = cache.find(masks[p]);
        if (it == cache.end()) {
          const auto sub = subset(r, masks[p]);
          double gamma = 0.0;
          if (sub.irs_count() > 0) {
            SystemConfig c = cfg;
            c.irs_count = sub.irs_count();
            gamma = solve_joint(sub, c).gamma;
          }
          it = cache.emplace(masks[p], 10.0 * std::log10(1.0 + gamma / cfg.noise_w())).first;
        }
        rate_sum[p] += it->second;
      }
    }
    for (std::size_t p = 0; p < np; ++p) {
      outage[p][static_cast<std::size_t>(t)] = rate_sum[p] / spec.inner_trials < spec.tau_db ? 1.0 : 0.0;
    }
  });

  ExperimentResult result{spec.kind, {}};
  const std::string name = variant.name();
  for (std::size_t p = 0; p < np; ++p) {
    const auto s = aggregate(outage[p]);
    result.rows.push_back({spec.sweep[p], name, s.mean, s.std, s.count});
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  switch (spec.kind) {
    case ExperimentKind::snr_vs_distance: return run_snr_vs_distance(spec);
    case ExperimentKind::snr_vs_elements: return run_snr_vs_elements(spec);
    case ExperimentKind::eta_validation: return run_eta_validation(spec);
    case ExperimentKind::outage_vs_blockage: return run_outage(spec);
  }
  throw std::logic_error("unknown experiment kind");
}

std::vector<double> default_sweep(ExperimentKind kind) {
  std::vector<double> s;
  switch (kind) {
    case ExperimentKind::snr_vs_distance:
      for (int d = 15; d <= 75; d += 2) s.push_back(d);
      break;
    case ExperimentKind::snr_vs_elements:
      s = {5, 10, 20, 40};
      break;
    case ExperimentKind::eta_validation:
      s = {1, 2, 3};
      break;
    case ExperimentKind::outage_vs_blockage:
      for (int i = 0; i <= 10; ++i) s.push_back(i / 10.0);
      break;
  }
  return s;
}

std::vector<Variant> default_variants(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::snr_vs_distance:
      return {Variant::proposed(2), Variant::continuous(), Variant::upper_bound(), Variant::no_irs()};
    case ExperimentKind::snr_vs_elements:
      return {Variant::proposed(1), Variant::proposed(2), Variant::continuous()};
    case ExperimentKind::eta_validation:
      return {};
    case ExperimentKind::outage_vs_blockage:
      return {Variant::proposed(2)};
  }
  return {};
}

Summary monte_carlo_gamma(const ScalingLawParams& params, int trials, std::uint64_t seed) {
  params.validate();
  if (trials < 1) throw std::invalid_argument("monte_carlo_gamma: trials must be >= 1");
  SystemConfig cfg;
  cfg.bs_antennas = params.bs_antennas;
  cfg.irs_count = static_cast<int>(params.varrho.size());
  cfg.elements_y = params.elements;
  cfg.elements_z = 1;
  cfg.tx_power_dbm = 30.0;  // 1 W
  cfg.resolution = params.resolution;
  const double sqrt_nm = std::sqrt(static_cast<double>(params.bs_antennas) * params.elements);

  std::vector<double> gammas(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(t)}));
    std::uniform_real_distribution<double> angle(-kPi / 2, kPi / 2);
    std::normal_distribution<double> normal(0.0, 1.0);
    ChannelRealization r;
    for (int k = 0; k < cfg.irs_count; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      const double s = std::sqrt(params.rho2[kk] / 2.0);
      const double re = normal(rng);
      const double im = normal(rng);
      RankOneChannel ch;
      ch.gain = sqrt_nm * cd{s * re, s * im};
      const double az = angle(rng);
      const double dep = angle(rng);
      ch.irs_response = ura_response(params.elements, 1, az, 0.0);
      ch.bs_response = ula_response(params.bs_antennas, dep).conjugate();
      r.bs_irs.push_back(std::move(ch));
      r.irs_user.push_back(gen_rayleigh_irs_user(params.elements, params.varrho[kk], rng));
    }
    gammas[static_cast<std::size_t>(t)] = solve_joint(r, cfg).gamma;
  }
  return aggregate(gammas);
}

}  // namespace irsbf
