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

#include "irsbf/beamformer.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <queue>

namespace irsbf {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

double wrap_to_2pi(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

double phase_distance(double a, double b, QuantizerMetric metric) {
  const double d = std::abs(a - b);
  if (metric == QuantizerMetric::linear) return d;
  const double r = std::fmod(d, kTwoPi);
  return std::min(r, kTwoPi - r);
}

void check_solver_inputs(const ChannelRealization& realization, const SystemConfig& cfg) {
  realization.validate();
  if (realization.irs_count() != cfg.irs_count) {
    throw std::invalid_argument("realization IRS count differs from config K");
  }
}

CMat bs_rows(const ChannelRealization& realization) {
  const auto k = realization.bs_irs.size();
  const auto n = realization.bs_irs.front().bs_response.size();
  CMat b(static_cast<Eigen::Index>(k), n);
  for (std::size_t i = 0; i < k; ++i) {
    b.row(static_cast<Eigen::Index>(i)) = realization.bs_irs[i].bs_response.transpose();
  }
  return b;
}

BeamformingSolution finish_solution(const ChannelRealization& realization, const SystemConfig& cfg,
                                    std::vector<PhaseConfig> phases, std::vector<double> z) {
  BeamformingSolution sol;
  sol.precoder = mrt(composite_channel(realization, phases), cfg.tx_power_w());
  sol.phases = std::move(phases);
  sol.effective_gains = std::move(z);
  sol.gamma = receive_power(realization, sol.precoder, sol.phases);
  return sol;
}

// Branch and bound over the common phases alpha_2..alpha_K (alpha_1 = 0).
// Each box is bounded with a second-order Taylor expansion around its centre:
// f(c + d) <= f(c) + sum_k |df/da_k| w_k + sum_{i<j} |A_ij| (w_i + w_j)^2.
struct PhaseBox {
  std::vector<double> center;
  std::vector<double> half_width;
  double value = 0.0;
  double bound = 0.0;
  bool operator<(const PhaseBox& other) const { return bound < other.bound; }
};

class QcqpBranchAndBound {
 public:
  explicit QcqpBranchAndBound(const CMat& a) : a_(a), k_(a.rows()), abs_a_(a.cwiseAbs()) {}

  double solve(const UpperBoundOptions& opts) {
    std::priority_queue<PhaseBox> open;
    std::vector<double> center(static_cast<std::size_t>(k_), 0.0);
    std::vector<double> width(static_cast<std::size_t>(k_), 0.0);
    // Start from a 4-way split per free coordinate.
    constexpr int kInitialSplit = 4;
    const auto free = static_cast<int>(k_ - 1);
    std::size_t total = 1;
    for (int d = 0; d < free; ++d) total *= kInitialSplit;
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rest = idx;
      for (Eigen::Index d = 1; d < k_; ++d) {
        const auto cell = static_cast<double>(rest % kInitialSplit);
        rest /= kInitialSplit;
        width[static_cast<std::size_t>(d)] = kPi / kInitialSplit;
        center[static_cast<std::size_t>(d)] = (2.0 * cell + 1.0) * kPi / kInitialSplit;
      }
      open.push(evaluate(center, width));
    }
    std::size_t boxes = open.size();
    while (true) {
      PhaseBox top = open.top();
      const double tol = opts.rel_tol * std::max(best_, 0.0);
      if (top.bound <= best_ + tol || boxes >= opts.max_boxes) {
        return std::max(top.bound, best_);
      }
      open.pop();
      std::size_t split = 1;
      for (std::size_t d = 2; d < top.half_width.size(); ++d) {
        if (top.half_width[d] > top.half_width[split]) split = d;
      }
      const double h = top.half_width[split] / 2.0;
      for (const double sign : {-1.0, 1.0}) {
        auto c = top.center;
        auto w = top.half_width;
        c[split] += sign * h;
        w[split] = h;
        open.push(evaluate(c, w));
        ++boxes;
      }
    }
  }

 private:
  PhaseBox evaluate(const std::vector<double>& center, const std::vector<double>& width) {
    CVec v(k_);
    for (Eigen::Index i = 0; i < k_; ++i) v(i) = std::polar(1.0, center[static_cast<std::size_t>(i)]);
    const CVec av = a_ * v;
    PhaseBox box{center, width, v.dot(av).real(), 0.0};
    double slack = 0.0;
    for (Eigen::Index i = 1; i < k_; ++i) {
      const double grad = 2.0 * (std::conj(v(i)) * av(i)).imag();
      slack += std::abs(grad) * width[static_cast<std::size_t>(i)];
    }
    for (Eigen::Index i = 0; i < k_; ++i) {
      for (Eigen::Index j = i + 1; j < k_; ++j) {
        const double s = width[static_cast<std::size_t>(i)] + width[static_cast<std::size_t>(j)];
        slack += abs_a_(i, j) * s * s;
      }
    }
    box.bound = box.value + slack;
    best_ = std::max(best_, box.value);
    return box;
  }

  const CMat& a_;
  Eigen::Index k_;
  Eigen::MatrixXd abs_a_;
  double best_ = 0.0;
};

}  // namespace

PhaseConfig PhaseConfig::continuous(std::vector<double> radians) {
  PhaseConfig pc;
  for (auto& r : radians) r = wrap_to_2pi(r);
  pc.radians_ = std::move(radians);
  return pc;
}

PhaseConfig PhaseConfig::discrete(std::vector<std::uint32_t> indices, int bits) {
  if (bits < 1 || bits > 30) throw std::invalid_argument("PhaseConfig: bits must be in [1, 30]");
  const std::uint32_t levels = 1u << bits;
  for (const auto i : indices) {
    if (i >= levels) throw std::invalid_argument("PhaseConfig: index out of range");
  }
  PhaseConfig pc;
  pc.bits_ = bits;
  pc.indices_ = std::move(indices);
  return pc;
}

std::size_t PhaseConfig::size() const {
  return is_discrete() ? indices_.size() : radians_.size();
}

double PhaseConfig::angle(std::size_t m) const {
  if (!is_discrete()) return radians_.at(m);
  return kTwoPi * static_cast<double>(indices_.at(m)) / static_cast<double>(1u << bits_);
}

std::vector<double> PhaseConfig::angles() const {
  std::vector<double> out(size());
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = angle(m);
  return out;
}

CVec PhaseConfig::unit_vector() const {
  CVec v(static_cast<Eigen::Index>(size()));
  for (std::size_t m = 0; m < size(); ++m) v(static_cast<Eigen::Index>(m)) = std::polar(1.0, angle(m));
  return v;
}

CVec effective_gain_vector(const RankOneChannel& ch, const CVec& h_r) {
  if (h_r.size() != ch.irs_response.size()) {
    throw std::invalid_argument("effective_gain_vector: dimension mismatch");
  }
  return ch.gain * h_r.conjugate().cwiseProduct(ch.irs_response);
}

PhaseConfig optimal_continuous_phases(const CVec& g) {
  std::vector<double> theta(static_cast<std::size_t>(g.size()), 0.0);
  for (Eigen::Index m = 0; m < g.size(); ++m) {
    if (g(m) != cd{0.0, 0.0}) theta[static_cast<std::size_t>(m)] = -std::arg(g(m));
  }
  return PhaseConfig::continuous(std::move(theta));
}

PhaseConfig quantize_phases(const PhaseConfig& theta_star, int bits, QuantizerMetric metric) {
  if (bits < 1 || bits > 30) throw std::invalid_argument("quantize_phases: b must be >= 1");
  const std::uint32_t levels = 1u << bits;
  const double step = kTwoPi / levels;
  std::vector<std::uint32_t> idx(theta_star.size());
  for (std::size_t m = 0; m < idx.size(); ++m) {
    const double theta = wrap_to_2pi(theta_star.angle(m));
    auto lo = static_cast<std::uint32_t>(std::floor(theta / step));
    if (lo >= levels) lo = levels - 1;
    const std::uint32_t hi = (lo + 1) % levels;
    const double d_lo = phase_distance(theta, lo * step, metric);
    const double d_hi = phase_distance(theta, hi * step, metric);
    if (d_lo < d_hi) {
      idx[m] = lo;
    } else if (d_hi < d_lo) {
      idx[m] = hi;
    } else {
      idx[m] = std::min(lo, hi);
    }
  }
  return PhaseConfig::discrete(std::move(idx), bits);
}

std::vector<double> quantization_errors(const PhaseConfig& continuous, const PhaseConfig& quantized) {
  if (continuous.size() != quantized.size()) {
    throw std::invalid_argument("quantization_errors: size mismatch");
  }
  std::vector<double> out(continuous.size());
  for (std::size_t m = 0; m < out.size(); ++m) {
    double d = wrap_to_2pi(quantized.angle(m) - continuous.angle(m));
    if (d > kPi) d -= kTwoPi;
    out[m] = d;
  }
  return out;
}

CMat assemble_phi(const Eigen::VectorXd& z, const CMat& b_rows) {
  if (z.size() != b_rows.rows()) throw std::invalid_argument("assemble_phi: dimension mismatch");
  if ((z.array() < 0.0).any()) throw std::invalid_argument("assemble_phi: z must be >= 0");
  return z.cast<cd>().asDiagonal() * b_rows;
}

CVec mrt(const CVec& effective_row, double p) {
  const double norm = effective_row.norm();
  if (!(norm > 0.0)) throw DegenerateChannel();
  return std::sqrt(p) * effective_row.conjugate() / norm;
}

CVec mrt_precoder(const CVec& v, const CMat& phi, double p) {
  if (v.size() != phi.rows()) throw std::invalid_argument("mrt_precoder: dimension mismatch");
  return mrt(phi.transpose() * v.conjugate(), p);
}

CVec composite_channel(const ChannelRealization& realization,
                       const std::vector<PhaseConfig>& phases) {
  realization.validate();
  if (phases.size() != realization.bs_irs.size()) {
    throw std::invalid_argument("composite_channel: one PhaseConfig per IRS required");
  }
  const auto n = realization.bs_irs.front().bs_response.size();
  CVec row = CVec::Zero(n);
  for (std::size_t k = 0; k < phases.size(); ++k) {
    const auto& ch = realization.bs_irs[k];
    if (phases[k].size() != static_cast<std::size_t>(ch.irs_response.size())) {
      throw std::invalid_argument("composite_channel: phase vector length mismatch");
    }
    const cd reflected = realization.irs_user[k]
                             .conjugate()
                             .cwiseProduct(phases[k].unit_vector())
                             .cwiseProduct(ch.irs_response)
                             .sum();
    row += ch.gain * reflected * ch.bs_response;
  }
  return row;
}

double receive_power(const ChannelRealization& realization, const CVec& w,
                     const std::vector<PhaseConfig>& phases) {
  realization.validate();
  if (phases.size() != realization.bs_irs.size()) {
    throw std::invalid_argument("receive_power: one PhaseConfig per IRS required");
  }
  const auto n = realization.bs_irs.front().bs_response.size();
  if (w.size() != n) throw std::invalid_argument("receive_power: precoder dimension mismatch");
  // h^H Theta (lambda a b^T) w, evaluated as lambda (h^H Theta a)(b^T w).
  cd y{0.0, 0.0};
  for (std::size_t k = 0; k < phases.size(); ++k) {
    const auto& ch = realization.bs_irs[k];
    const CVec& h = realization.irs_user[k];
    if (phases[k].size() != static_cast<std::size_t>(h.size())) {
      throw std::invalid_argument("receive_power: phase vector length mismatch");
    }
    const cd reflected = h.conjugate().cwiseProduct(phases[k].unit_vector()).cwiseProduct(ch.irs_response).sum();
    y += ch.gain * reflected * (ch.bs_response.transpose() * w)(0, 0);
  }
  return std::norm(y);
}

BeamformingSolution solve_joint(const ChannelRealization& realization, const SystemConfig& cfg,
                                QuantizerMetric metric) {
  check_solver_inputs(realization, cfg);
  std::vector<PhaseConfig> phases;
  std::vector<double> z;
  phases.reserve(realization.bs_irs.size());
  for (std::size_t k = 0; k < realization.bs_irs.size(); ++k) {
    const CVec g = effective_gain_vector(realization.bs_irs[k], realization.irs_user[k]);
    z.push_back(g.cwiseAbs().sum());
    auto theta = optimal_continuous_phases(g);
    if (!cfg.resolution.is_continuous()) {
      theta = quantize_phases(theta, cfg.resolution.bit_count(), metric);
    }
    phases.push_back(std::move(theta));
  }
  return finish_solution(realization, cfg, std::move(phases), std::move(z));
}

BeamformingSolution brute_force_discrete(const ChannelRealization& realization,
                                         const SystemConfig& cfg) {
  check_solver_inputs(realization, cfg);
  if (cfg.resolution.is_continuous()) {
    throw std::invalid_argument("brute_force_discrete: needs a finite resolution");
  }
  const int bits = cfg.resolution.bit_count();
  const std::uint32_t levels = cfg.resolution.levels();
  const auto k_count = realization.bs_irs.size();
  std::uint64_t total_digits = 0;
  for (const auto& h : realization.irs_user) total_digits += static_cast<std::uint64_t>(h.size());
  if (static_cast<std::uint64_t>(bits) * total_digits > 20) {
    throw std::invalid_argument("brute_force_discrete: search space exceeds 2^20 configurations");
  }

  // Per-IRS tables of q_k = sum_m g_m e^{j theta_m}, indexed with element 0
  // as the most significant digit.
  std::vector<std::vector<cd>> tables(k_count);
  std::vector<double> z;
  for (std::size_t k = 0; k < k_count; ++k) {
    const CVec g = effective_gain_vector(realization.bs_irs[k], realization.irs_user[k]);
    z.push_back(g.cwiseAbs().sum());
    const auto m = static_cast<std::size_t>(g.size());
    std::vector<cd> table{cd{0.0, 0.0}};
    for (std::size_t e = 0; e < m; ++e) {
      std::vector<cd> next;
      next.reserve(table.size() * levels);
      for (const auto& partial : table) {
        for (std::uint32_t l = 0; l < levels; ++l) {
          next.push_back(partial + g(static_cast<Eigen::Index>(e)) * std::polar(1.0, kTwoPi * l / levels));
        }
      }
      table = std::move(next);
    }
    tables[k] = std::move(table);
  }

  const CMat b = bs_rows(realization);
  const CMat gram = b.conjugate() * b.transpose();  // gram(i, j) = b_i^H b_j

  std::vector<std::size_t> pos(k_count, 0);
  std::vector<std::size_t> best_pos = pos;
  double best = -1.0;
  CVec q(static_cast<Eigen::Index>(k_count));
  while (true) {
    for (std::size_t k = 0; k < k_count; ++k) q(static_cast<Eigen::Index>(k)) = tables[k][pos[k]];
    const double value = q.dot(gram * q).real();
    if (value > best) {
      best = value;
      best_pos = pos;
    }
    // Odometer step, IRS 0 most significant.
    std::size_t d = k_count;
    bool wrapped = true;
    while (d > 0) {
      --d;
      if (++pos[d] < tables[d].size()) {
        wrapped = false;
        break;
      }
      pos[d] = 0;
    }
    if (wrapped) break;
  }

  std::vector<PhaseConfig> phases;
  for (std::size_t k = 0; k < k_count; ++k) {
    const auto m = static_cast<std::size_t>(realization.irs_user[k].size());
    std::vector<std::uint32_t> idx(m);
    std::size_t rest = best_pos[k];
    for (std::size_t e = m; e > 0; --e) {
      idx[e - 1] = static_cast<std::uint32_t>(rest % levels);
      rest /= levels;
    }
    phases.push_back(PhaseConfig::discrete(std::move(idx), bits));
  }
  return finish_solution(realization, cfg, std::move(phases), std::move(z));
}

double unit_modulus_qcqp_bound(const CMat& a, const UpperBoundOptions& opts) {
  const auto k = a.rows();
  if (k == 0 || a.cols() != k) throw std::invalid_argument("qcqp bound: square matrix required");
  if (k == 1) return a(0, 0).real();
  Eigen::SelfAdjointEigenSolver<CMat> eig(a, Eigen::EigenvaluesOnly);
  double bound = static_cast<double>(k) * eig.eigenvalues().maxCoeff();
  bound = std::min(bound, a.cwiseAbs().sum());
  if (k <= opts.refine_max_irs) {
    bound = std::min(bound, QcqpBranchAndBound(a).solve(opts));
  }
  return bound;
}

double upper_bound_power(const ChannelRealization& realization, const SystemConfig& cfg,
                         const UpperBoundOptions& opts) {
  check_solver_inputs(realization, cfg);
  Eigen::VectorXd z(realization.irs_count());
  for (int k = 0; k < realization.irs_count(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    z(k) = effective_gain_vector(realization.bs_irs[kk], realization.irs_user[kk]).cwiseAbs().sum();
  }
  const CMat phi = assemble_phi(z, bs_rows(realization));
  const CMat a = phi * phi.adjoint();
  // Relative slack absorbs rounding between this route and receive_power.
  return cfg.tx_power_w() * unit_modulus_qcqp_bound(a, opts) * (1.0 + 1e-9);
}

}  // namespace irsbf
