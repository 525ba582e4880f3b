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

#include "irsbf/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace irsbf {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

cd complex_gaussian(double variance, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = std::sqrt(variance / 2.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return {scale * re, scale * im};
}

double draw_uniform(double lo, double hi, Rng& rng) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

cd draw_path_gain(const PathLossParams& params, double dist_m, Rng& rng, Rng* shadow_rng) {
  Rng& xi_rng = shadow_rng != nullptr ? *shadow_rng : rng;
  const double xi = std::normal_distribution<double>(0.0, params.shadowing_std_db)(xi_rng);
  return sample_path_gain(params, dist_m, rng, xi);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(base);
  for (const auto k : keys) {
    h = splitmix64(h ^ splitmix64(k + 0x632BE59BD9B4E019ULL));
  }
  return h;
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double dbi_to_amplitude(double dbi) { return std::pow(10.0, dbi / 20.0); }

PhaseResolution PhaseResolution::bits(int b) {
  if (b < 1 || b > 30) {
    throw std::invalid_argument("b must be >= 1 or 'continuous'");
  }
  PhaseResolution r;
  r.bits_ = b;
  return r;
}

int PhaseResolution::bit_count() const {
  if (!bits_) {
    throw std::logic_error("continuous resolution has no bit count");
  }
  return *bits_;
}

std::uint32_t PhaseResolution::levels() const { return 1u << bit_count(); }

std::string PhaseResolution::to_string() const {
  return bits_ ? std::to_string(*bits_) : std::string("continuous");
}

PhaseResolution PhaseResolution::parse(const std::string& text) {
  if (text == "continuous" || text == "inf") {
    return continuous();
  }
  std::size_t used = 0;
  int b = 0;
  try {
    b = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("b must be >= 1 or 'continuous'");
  }
  if (used != text.size()) {
    throw std::invalid_argument("b must be >= 1 or 'continuous'");
  }
  return bits(b);
}

double PathLossParams::kappa_db(double dist_m, double xi_db) const {
  return intercept_db + 10.0 * exponent * std::log10(dist_m) + xi_db;
}

double PathLossParams::mean_power(double dist_m) const {
  // E[10^{-xi/10}] for xi ~ N(0, s^2) is exp((s ln10 / 10)^2 / 2).
  const double s = shadowing_std_db * std::log(10.0) / 10.0;
  return std::pow(10.0, -0.1 * kappa_db(dist_m)) * std::exp(0.5 * s * s);
}

double SystemConfig::link_gain_amplitude() const {
  return dbi_to_amplitude(gain_tx_dbi) * dbi_to_amplitude(gain_rx_dbi);
}

void SystemConfig::validate() const {
  if (bs_antennas < 1) throw std::invalid_argument("N must be >= 1");
  if (irs_count < 1) throw std::invalid_argument("K must be >= 1");
  if (elements_y < 1) throw std::invalid_argument("M_y must be >= 1");
  if (elements_z < 1) throw std::invalid_argument("M_z must be >= 1");
  if (paths < 1) throw std::invalid_argument("paths must be >= 1");
  if (los.shadowing_std_db < 0.0 || nlos.shadowing_std_db < 0.0) {
    throw std::invalid_argument("shadowing std must be >= 0");
  }
}

void ScenarioGeometry::validate() const {
  if (!(bs_to_first_irs > 0.0)) throw std::invalid_argument("d_b must be > 0");
  if (!(vertical_offset > 0.0)) throw std::invalid_argument("d_v must be > 0");
  if (!(irs_span > 0.0)) throw std::invalid_argument("d_span must be > 0");
  if (!(bs_to_user > 0.0)) throw std::invalid_argument("d_u must be > 0");
}

std::vector<double> ScenarioGeometry::irs_positions(int irs_count) const {
  std::vector<double> xs(static_cast<std::size_t>(irs_count));
  for (int k = 0; k < irs_count; ++k) {
    const double frac = irs_count == 1 ? 0.0 : static_cast<double>(k) / (irs_count - 1);
    xs[static_cast<std::size_t>(k)] = bs_to_first_irs + frac * irs_span;
  }
  return xs;
}

BsIrsLink bs_irs_link(const ScenarioGeometry& geom, int irs_count, int k) {
  const double x = geom.irs_positions(irs_count).at(static_cast<std::size_t>(k));
  const double y = geom.vertical_offset;
  BsIrsLink link;
  link.distance = std::hypot(x, y);
  link.angles.departure = std::asin(y / link.distance);
  link.angles.arrival_azimuth = std::asin(x / link.distance);
  link.angles.arrival_elevation = 0.0;
  return link;
}

double irs_user_distance(const ScenarioGeometry& geom, int irs_count, int k) {
  const double x = geom.irs_positions(irs_count).at(static_cast<std::size_t>(k));
  return std::hypot(x - geom.bs_to_user, geom.vertical_offset);
}

CMat RankOneChannel::matrix() const {
  return gain * irs_response * bs_response.transpose();
}

void ChannelRealization::validate() const {
  if (bs_irs.size() != irs_user.size()) {
    throw std::invalid_argument("bs_irs and irs_user lengths differ");
  }
  if (bs_irs.empty()) {
    throw std::invalid_argument("realization has no IRS");
  }
  const auto n = bs_irs.front().bs_response.size();
  for (std::size_t k = 0; k < bs_irs.size(); ++k) {
    if (bs_irs[k].bs_response.size() != n) {
      throw std::invalid_argument("BS-side dimension mismatch across IRSs");
    }
    if (bs_irs[k].irs_response.size() != irs_user[k].size()) {
      throw std::invalid_argument("IRS-side dimension mismatch at IRS " + std::to_string(k));
    }
  }
  if (direct && direct->size() != n) {
    throw std::invalid_argument("direct channel dimension mismatch");
  }
}

CVec ula_response(int n, double phi) {
  if (n < 1) throw std::invalid_argument("ula_response: N must be >= 1");
  CVec v(n);
  const double s = std::sin(phi);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) {
    v(i) = norm * std::polar(1.0, kPi * i * s);
  }
  return v;
}

CVec ura_response(int m_y, int m_z, double azimuth, double elevation) {
  if (m_y < 1 || m_z < 1) throw std::invalid_argument("ura_response: M_y, M_z must be >= 1");
  const double sy = std::sin(azimuth) * std::cos(elevation);
  const double sz = std::sin(elevation);
  const double norm = 1.0 / std::sqrt(static_cast<double>(m_y) * m_z);
  CVec v(static_cast<Eigen::Index>(m_y) * m_z);
  for (int iy = 0; iy < m_y; ++iy) {
    for (int iz = 0; iz < m_z; ++iz) {
      v(static_cast<Eigen::Index>(iy) * m_z + iz) =
          norm * std::polar(1.0, kPi * (iy * sy + iz * sz));
    }
  }
  return v;
}

cd sample_path_gain(const PathLossParams& params, double dist_m, Rng& rng,
                    std::optional<double> fixed_xi_db) {
  if (!(dist_m > 0.0)) throw std::invalid_argument("sample_path_gain: distance must be > 0");
  const double xi = fixed_xi_db
                        ? *fixed_xi_db
                        : std::normal_distribution<double>(0.0, params.shadowing_std_db)(rng);
  return complex_gaussian(std::pow(10.0, -0.1 * params.kappa_db(dist_m, xi)), rng);
}

CVec irs_user_channel_from_paths(const SystemConfig& cfg, const std::vector<PathComponent>& paths) {
  if (paths.empty()) throw std::invalid_argument("IRS-user channel needs at least one path");
  const int m = cfg.elements();
  CVec h = CVec::Zero(m);
  for (const auto& p : paths) {
    h += p.gain * ura_response(cfg.elements_y, cfg.elements_z, p.azimuth, p.elevation);
  }
  const double scale = std::sqrt(static_cast<double>(m) / paths.size()) * cfg.link_gain_amplitude();
  return scale * h;
}

CVec direct_channel_from_paths(int n, const std::vector<PathComponent>& paths) {
  if (paths.empty()) throw std::invalid_argument("direct channel needs at least one path");
  CVec h = CVec::Zero(n);
  for (const auto& p : paths) {
    h += p.gain * ula_response(n, p.azimuth);
  }
  return std::sqrt(static_cast<double>(n) / paths.size()) * h;
}

CVec gen_irs_user_channel(const SystemConfig& cfg, int paths, double dist_m, Rng& rng,
                          Rng* shadow_rng) {
  if (paths < 1) throw std::invalid_argument("gen_irs_user_channel: L must be >= 1");
  std::vector<PathComponent> comps(static_cast<std::size_t>(paths));
  for (auto& c : comps) {
    c.gain = draw_path_gain(cfg.nlos, dist_m, rng, shadow_rng);
    c.azimuth = draw_uniform(-kPi / 2, kPi / 2, rng);
    c.elevation = draw_uniform(-kPi / 4, kPi / 4, rng);
  }
  return irs_user_channel_from_paths(cfg, comps);
}

RankOneChannel gen_bs_irs_channel(const SystemConfig& cfg, const LinkAngles& angles,
                                  double dist_m, Rng& rng, Rng* shadow_rng) {
  const double nm = static_cast<double>(cfg.bs_antennas) * cfg.elements();
  RankOneChannel ch;
  ch.gain = std::sqrt(nm) * cfg.link_gain_amplitude() *
            draw_path_gain(cfg.los, dist_m, rng, shadow_rng);
  ch.irs_response =
      ura_response(cfg.elements_y, cfg.elements_z, angles.arrival_azimuth, angles.arrival_elevation);
  ch.bs_response = ula_response(cfg.bs_antennas, angles.departure).conjugate();
  return ch;
}

CVec gen_rayleigh_irs_user(int m, double varrho, Rng& rng) {
  if (m < 1) throw std::invalid_argument("gen_rayleigh_irs_user: M must be >= 1");
  if (!(varrho > 0.0)) throw std::invalid_argument("gen_rayleigh_irs_user: varrho must be > 0");
  CVec h(m);
  for (int i = 0; i < m; ++i) {
    h(i) = complex_gaussian(varrho * varrho, rng);
  }
  return h;
}

CVec gen_direct_channel(const SystemConfig& cfg, int paths, double dist_m, Rng& rng,
                        Rng* shadow_rng) {
  if (paths < 1) throw std::invalid_argument("gen_direct_channel: L must be >= 1");
  std::vector<PathComponent> comps(static_cast<std::size_t>(paths));
  for (auto& c : comps) {
    c.gain = draw_path_gain(cfg.nlos, dist_m, rng, shadow_rng);
    c.azimuth = draw_uniform(-kPi / 2, kPi / 2, rng);
  }
  return direct_channel_from_paths(cfg.bs_antennas, comps);
}

}  // namespace irsbf
