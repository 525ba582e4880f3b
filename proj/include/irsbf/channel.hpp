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

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace irsbf {

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Rng = std::mt19937_64;

inline constexpr double kPi = 3.14159265358979323846;

/// Mixes a base seed with a sequence of keys (splitmix64 chain). Used to give
/// every trial and every link its own independent stream.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys);

double dbm_to_watts(double dbm);
double dbi_to_amplitude(double dbi);

/// Phase-shifter resolution: a finite number of bits, or continuous phases.
class PhaseResolution {
 public:
  static PhaseResolution continuous() { return PhaseResolution{}; }
  static PhaseResolution bits(int b);

  bool is_continuous() const { return !bits_.has_value(); }
  int bit_count() const;        // throws for continuous
  std::uint32_t levels() const;  // 2^b, throws for continuous
  std::string to_string() const; // "2" or "continuous"
  static PhaseResolution parse(const std::string& text);

  friend bool operator==(const PhaseResolution&, const PhaseResolution&) = default;

 private:
  std::optional<int> bits_;
};

/// Path loss model kappa = e + 10 f log10(d) + xi, xi ~ N(0, sigma^2) in dB.
struct PathLossParams {
  double intercept_db = 0.0;
  double exponent = 0.0;
  double shadowing_std_db = 0.0;

  static PathLossParams los() { return {61.4, 2.0, 5.8}; }
  static PathLossParams nlos() { return {72.0, 2.92, 8.7}; }

  /// kappa in dB for a given shadowing realisation.
  double kappa_db(double dist_m, double xi_db = 0.0) const;
  /// Mean power 10^{-kappa/10} averaged over lognormal shadowing.
  double mean_power(double dist_m) const;
};

struct SystemConfig {
  int bs_antennas = 32;   // N
  int irs_count = 3;      // K
  int elements_y = 10;    // M_y, horizontal
  int elements_z = 5;     // M_z, vertical
  double tx_power_dbm = 30.0;
  double noise_dbm = -85.0;
  PhaseResolution resolution = PhaseResolution::bits(2);
  double gain_tx_dbi = 9.82;
  double gain_rx_dbi = 0.0;
  PathLossParams los = PathLossParams::los();
  PathLossParams nlos = PathLossParams::nlos();
  int paths = 4;  // L for IRS-user and direct links
  bool freeze_shadowing = false;

  int elements() const { return elements_y * elements_z; }
  double tx_power_w() const { return dbm_to_watts(tx_power_dbm); }
  double noise_w() const { return dbm_to_watts(noise_dbm); }
  /// Product of the two per-link element gains as an amplitude factor.
  double link_gain_amplitude() const;
  void validate() const;
};

/// BS at the origin, user on the x axis at d_u, IRSs on the line y = d_v
/// spread evenly over [d_b, d_b + d_span].
struct ScenarioGeometry {
  double bs_to_first_irs = 11.0;   // d_b
  double vertical_offset = 1.5;    // d_v
  double irs_span = 50.0;          // d
  double bs_to_user = 41.0;        // d_u

  void validate() const;
  std::vector<double> irs_positions(int irs_count) const;
};

struct LinkAngles {
  double departure = 0.0;        // at the BS ULA, from broadside
  double arrival_azimuth = 0.0;  // at the IRS URA
  double arrival_elevation = 0.0;
};

struct BsIrsLink {
  double distance = 0.0;
  LinkAngles angles;
};

/// LOS ray between the BS and IRS k. The BS ULA lies along y with broadside
/// towards +x; IRS panels lie in the x-z plane facing the BS-user line.
BsIrsLink bs_irs_link(const ScenarioGeometry& geom, int irs_count, int k);
double irs_user_distance(const ScenarioGeometry& geom, int irs_count, int k);

/// G = gain * irs_response * bs_response^T.
struct RankOneChannel {
  cd gain{0.0, 0.0};
  CVec irs_response;  // M
  CVec bs_response;   // N

  CMat matrix() const;
};

struct ChannelRealization {
  std::vector<RankOneChannel> bs_irs;
  std::vector<CVec> irs_user;
  std::optional<CVec> direct;

  int irs_count() const { return static_cast<int>(bs_irs.size()); }
  void validate() const;
};

CVec ula_response(int n, double phi);
CVec ura_response(int m_y, int m_z, double azimuth, double elevation);

/// Complex gain ~ CN(0, 10^{-kappa/10}). When `fixed_xi_db` is set the
/// shadowing term is not drawn.
cd sample_path_gain(const PathLossParams& params, double dist_m, Rng& rng,
                    std::optional<double> fixed_xi_db = std::nullopt);

struct PathComponent {
  cd gain{1.0, 0.0};
  double azimuth = 0.0;
  double elevation = 0.0;  // ignored by the BS-side ULA
};

/// sqrt(M/L) * sum_l gain_l * lambda_r * lambda_t * ura(az_l, el_l).
CVec irs_user_channel_from_paths(const SystemConfig& cfg, const std::vector<PathComponent>& paths);
/// sqrt(N/L) * sum_l gain_l * ula(az_l), no element gains.
CVec direct_channel_from_paths(int n, const std::vector<PathComponent>& paths);

/// Shadowing draws come from `shadow_rng` when given, else from `rng`.
CVec gen_irs_user_channel(const SystemConfig& cfg, int paths, double dist_m, Rng& rng,
                          Rng* shadow_rng = nullptr);
RankOneChannel gen_bs_irs_channel(const SystemConfig& cfg, const LinkAngles& angles,
                                  double dist_m, Rng& rng, Rng* shadow_rng = nullptr);
CVec gen_rayleigh_irs_user(int m, double varrho, Rng& rng);
CVec gen_direct_channel(const SystemConfig& cfg, int paths, double dist_m, Rng& rng,
                        Rng* shadow_rng = nullptr);

}  // namespace irsbf
