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

#include "irsbf/channel.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace irsbf {

/// Thrown when the effective channel seen by the precoder is identically zero.
class DegenerateChannel : public std::runtime_error {
 public:
  DegenerateChannel() : std::runtime_error("degenerate channel") {}
};

/// Phase shifts of one IRS. Discrete configurations hold indices into the
/// alphabet {0, 2pi/2^b, ..., 2pi(2^b-1)/2^b}; continuous ones hold radians
/// in [0, 2pi).
class PhaseConfig {
 public:
  PhaseConfig() = default;
  static PhaseConfig continuous(std::vector<double> radians);
  static PhaseConfig discrete(std::vector<std::uint32_t> indices, int bits);

  std::size_t size() const;
  bool is_discrete() const { return bits_ > 0; }
  int bits() const { return bits_; }
  const std::vector<std::uint32_t>& indices() const { return indices_; }
  double angle(std::size_t m) const;
  std::vector<double> angles() const;
  /// [e^{j theta_1}, ..., e^{j theta_M}]
  CVec unit_vector() const;

 private:
  int bits_ = 0;
  std::vector<std::uint32_t> indices_;
  std::vector<double> radians_;
};

struct BeamformingSolution {
  CVec precoder;                    // w
  std::vector<PhaseConfig> phases;  // one per IRS
  double gamma = 0.0;               // received power, W
  std::vector<double> effective_gains;  // z_k = ||g_k||_1
};

enum class QuantizerMetric {
  circular,  // min(|d|, 2pi - |d|)
  linear,    // raw |theta - theta*|, mis-rounds near 2pi
};

/// g = lambda * (conj(h_r) o a).
CVec effective_gain_vector(const RankOneChannel& ch, const CVec& h_r);

/// Phases -arg(g_m) mod 2pi, so that theta^T g = ||g||_1.
PhaseConfig optimal_continuous_phases(const CVec& g);

/// Nearest alphabet point per element; ties go to the smaller index.
PhaseConfig quantize_phases(const PhaseConfig& theta_star, int bits,
                            QuantizerMetric metric = QuantizerMetric::circular);

/// Wrapped difference quantized - continuous, in (-pi, pi].
std::vector<double> quantization_errors(const PhaseConfig& continuous, const PhaseConfig& quantized);

/// Phi = diag(z) * B with row k of B equal to b_k^T.
CMat assemble_phi(const Eigen::VectorXd& z, const CMat& b_rows);

/// sqrt(p) * (row)^H / ||row|| for an effective 1xN channel given as a vector.
CVec mrt(const CVec& effective_row, double p);
/// MRT against v^H Phi.
CVec mrt_precoder(const CVec& v, const CMat& phi, double p);

/// sum_k h_k^H Theta_k G_k, returned as an N-vector (row entries).
CVec composite_channel(const ChannelRealization& realization,
                       const std::vector<PhaseConfig>& phases);

double receive_power(const ChannelRealization& realization, const CVec& w,
                     const std::vector<PhaseConfig>& phases);

/// Per-IRS alignment, b-bit quantization, common phases alpha_k = 0 and MRT on
/// the exact composite channel.
BeamformingSolution solve_joint(const ChannelRealization& realization, const SystemConfig& cfg,
                                QuantizerMetric metric = QuantizerMetric::circular);

/// Largest search space accepted by brute_force_discrete.
inline constexpr std::uint64_t kBruteForceLimit = 1ULL << 20;

/// Exhaustive search over all discrete phase configurations, exact MRT for
/// each. Ties keep the lexicographically first configuration.
BeamformingSolution brute_force_discrete(const ChannelRealization& realization,
                                         const SystemConfig& cfg);

struct UpperBoundOptions {
  int refine_max_irs = 5;
  double rel_tol = 1e-4;
  std::size_t max_boxes = 200000;
};

/// Certified upper bound on p * max_{|v_k|=1} v^H Phi Phi^H v, which in turn
/// bounds the received power of every phase configuration.
double upper_bound_power(const ChannelRealization& realization, const SystemConfig& cfg,
                         const UpperBoundOptions& opts = {});

/// Certified upper bound on max_{|v_k|=1} v^H A v for Hermitian PSD A.
double unit_modulus_qcqp_bound(const CMat& a, const UpperBoundOptions& opts = {});

}  // namespace irsbf
