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

#include "irsbf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irsbf {

void ScalingLawParams::validate() const {
  if (bs_antennas < 1 || elements < 1) throw std::invalid_argument("N and M must be >= 1");
  if (varrho.empty() || varrho.size() != rho2.size()) {
    throw std::invalid_argument("varrho and rho2 must be non-empty with length K");
  }
  for (std::size_t k = 0; k < varrho.size(); ++k) {
    if (!(varrho[k] > 0.0) || !(rho2[k] > 0.0)) {
      throw std::invalid_argument("varrho and rho2 must be positive");
    }
  }
}

double mean_phase_factor(int bits) {
  if (bits < 1) throw std::invalid_argument("mean_phase_factor: b must be >= 1");
  const double levels = std::ldexp(1.0, bits);
  return levels / kPi * std::sin(kPi / levels);
}

double mean_phase_factor(const PhaseResolution& r) {
  return r.is_continuous() ? 1.0 : mean_phase_factor(r.bit_count());
}

double eta(int bits) {
  const double f = mean_phase_factor(bits);
  return f * f;
}

double eta(const PhaseResolution& r) { return r.is_continuous() ? 1.0 : eta(r.bit_count()); }

double eta_db(int bits) { return 10.0 * std::log10(eta(bits)); }

double theoretical_gamma(const ScalingLawParams& params) {
  params.validate();
  const double n = params.bs_antennas;
  const double m = params.elements;
  const double loss = eta(params.resolution);
  double incoherent = 0.0;
  double coherent = 0.0;
  for (std::size_t k = 0; k < params.varrho.size(); ++k) {
    const double v2 = params.varrho[k] * params.varrho[k];
    incoherent += v2 * params.rho2[k];
    coherent += params.rho2[k] * kPi * v2 / 4.0 * loss;
  }
  return n * m * incoherent + n * m * (m - 1.0) * coherent;
}

double ks_critical_value(std::size_t n, double alpha) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

DiscretizationStats discretization_error_stats(std::span<const double> samples, int bits,
                                               std::size_t bins) {
  if (samples.size() < kMinDiscretizationSamples) {
    throw std::invalid_argument("discretization_error_stats: at least 1000 samples required");
  }
  if (bits < 1) throw std::invalid_argument("discretization_error_stats: b must be >= 1");
  if (bins == 0) throw std::invalid_argument("discretization_error_stats: bins must be > 0");
  const double half = kPi / std::ldexp(1.0, bits);

  DiscretizationStats st;
  st.samples = samples.size();
  st.histogram.assign(bins, 0);
  std::complex<double> acc{0.0, 0.0};
  for (const double d : samples) {
    acc += std::polar(1.0, d);
    const double u = std::clamp((d + half) / (2.0 * half), 0.0, 1.0);
    auto bin = static_cast<std::size_t>(u * static_cast<double>(bins));
    st.histogram[std::min(bin, bins - 1)] += 1;
  }
  st.mean = acc / static_cast<double>(samples.size());

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d_max = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = std::clamp((sorted[i] + half) / (2.0 * half), 0.0, 1.0);
    d_max = std::max({d_max, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  st.ks_statistic = d_max;
  st.ks_critical_1pct = ks_critical_value(sorted.size(), 0.01);
  return st;
}

}  // namespace irsbf
