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

#include <complex>
#include <span>
#include <vector>

namespace irsbf {

/// Inputs of the large-M average-power approximation under Rayleigh
/// IRS-user channels and lambda_k = sqrt(NM) rho_k.
struct ScalingLawParams {
  int bs_antennas = 32;
  int elements = 256;
  std::vector<double> varrho;  // per-IRS Rayleigh std
  std::vector<double> rho2;    // per-IRS E[|rho_k|^2]
  PhaseResolution resolution = PhaseResolution::bits(2);

  void validate() const;
};

/// E[e^{j dtheta}] for dtheta uniform on [-pi/2^b, pi/2^b]: (2^b/pi) sin(pi/2^b).
double mean_phase_factor(int bits);
double mean_phase_factor(const PhaseResolution& r);

/// Average power ratio gamma(b)/gamma(inf) as M grows: mean_phase_factor(b)^2.
double eta(int bits);
double eta(const PhaseResolution& r);
double eta_db(int bits);

/// Average received power with p = 1, cross-IRS terms dropped:
/// NM sum varrho^2 E|rho|^2 + NM(M-1) sum E|rho|^2 (pi varrho^2 / 4) eta(b).
double theoretical_gamma(const ScalingLawParams& params);

struct DiscretizationStats {
  std::complex<double> mean;          // empirical E[e^{j dtheta}]
  std::vector<std::size_t> histogram; // equal-width bins over [-pi/2^b, pi/2^b]
  double ks_statistic = 0.0;          // sup |F_n - F_uniform|
  double ks_critical_1pct = 0.0;      // asymptotic critical value at alpha = 0.01
  std::size_t samples = 0;

  bool ks_passes() const { return ks_statistic < ks_critical_1pct; }
};

inline constexpr std::size_t kMinDiscretizationSamples = 1000;

/// Throws std::invalid_argument below kMinDiscretizationSamples samples.
DiscretizationStats discretization_error_stats(std::span<const double> samples, int bits,
                                               std::size_t bins = 16);

/// Asymptotic one-sample Kolmogorov-Smirnov critical value sqrt(-ln(alpha/2)/2)/sqrt(n).
double ks_critical_value(std::size_t n, double alpha);

}  // namespace irsbf
