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

#include "irsbf/analysis.hpp"
#include "irsbf/beamformer.hpp"
#include "irsbf/channel.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace irsbf {

enum class ExperimentKind { snr_vs_distance, snr_vs_elements, eta_validation, outage_vs_blockage };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& text);

/// One curve of an experiment.
struct Variant {
  enum class Kind { proposed, continuous, upper_bound, no_irs };
  Kind kind = Kind::proposed;
  int bits = 2;  // proposed only

  static Variant proposed(int b) { return {Kind::proposed, b}; }
  static Variant continuous() { return {Kind::continuous, 0}; }
  static Variant upper_bound() { return {Kind::upper_bound, 0}; }
  static Variant no_irs() { return {Kind::no_irs, 0}; }

  /// "b<bits>", "continuous", "upper_bound" or "no_irs".
  std::string name() const;
  static Variant parse(const std::string& text);
  friend bool operator==(const Variant&, const Variant&) = default;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::snr_vs_distance;
  /// d_u in metres, M_z counts (M_y fixed by cfg), bit counts, or blockage
  /// probabilities depending on `kind`.
  std::vector<double> sweep;
  int trials = 1000;
  std::uint64_t seed = 1;
  SystemConfig cfg;
  ScenarioGeometry geom;
  std::vector<Variant> variants;
  double tau_db = 1.5;
  int inner_trials = 200;
  double varrho = 1.0;  // Rayleigh std for eta_validation
  int workers = 1;

  void validate() const;
};

struct ResultRow {
  double x = 0.0;
  std::string variant;
  double value = 0.0;
  double std = 0.0;
  int trials = 0;
};

struct ExperimentResult {
  ExperimentKind kind = ExperimentKind::snr_vs_distance;
  std::vector<ResultRow> rows;

  const ResultRow& find(double x, const std::string& variant) const;
};

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single value
  int count = 0;
};

/// Mean and sample std, summed in input order. Throws on empty input.
Summary aggregate(std::span<const double> values);

/// Builds the channel draw of one trial. Each IRS link and the direct link get
/// their own stream derived from `trial_seed`.
ChannelRealization draw_geometric_realization(const SystemConfig& cfg, const ScenarioGeometry& geom,
                                              std::uint64_t trial_seed,
                                              std::uint64_t shadow_seed);

ExperimentResult run_snr_vs_distance(const ExperimentSpec& spec);
ExperimentResult run_snr_vs_elements(const ExperimentSpec& spec);
ExperimentResult run_eta_validation(const ExperimentSpec& spec);
ExperimentResult run_outage(const ExperimentSpec& spec);
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Default sweep and variant set for an experiment kind.
std::vector<double> default_sweep(ExperimentKind kind);
std::vector<Variant> default_variants(ExperimentKind kind);

/// Monte Carlo average of gamma(b) with p = 1 under the scaling-law model:
/// lambda_k = sqrt(NM) rho_k, rho_k ~ CN(0, rho2_k), Rayleigh IRS-user links and
/// random array angles.
Summary monte_carlo_gamma(const ScalingLawParams& params, int trials, std::uint64_t seed);

/// Runs fn(t) for t in [0, count) on `workers` threads. Results must be
/// written to per-index slots.
template <typename Fn>
void parallel_trials(int count, int workers, Fn&& fn);

}  // namespace irsbf

#include "irsbf/detail/parallel.hpp"
