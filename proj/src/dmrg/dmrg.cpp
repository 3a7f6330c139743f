// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfvqe/dmrg/dmrg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "dfvqe/core/error.hpp"
#include "dfvqe/encode/jordan_wigner.hpp"
#include "dfvqe/tensor/contract.hpp"

namespace dfvqe {

void DmrgConfig::validate() const {
  if (max_sweeps < 1) throw ValidationError("dmrg: max_sweeps must be >= 1");
  if (chi_schedule.empty()) throw ValidationError("dmrg: chi_schedule is empty");
  if (noise_schedule.empty()) throw ValidationError("dmrg: noise_schedule is empty");
  for (int c : chi_schedule)
    if (c < 1) throw ValidationError(fmt::format("dmrg: bond cap {} must be >= 1", c));
  for (double a : noise_schedule)
    if (!(a >= 0.0) || !std::isfinite(a))
      throw ValidationError(fmt::format("dmrg: noise {} must be finite and >= 0", a));
  for (const auto& p : penalties)
    if (!(p.weight >= 0.0) || !std::isfinite(p.weight))
      throw ValidationError(fmt::format("dmrg: penalty weight {} must be >= 0", p.weight));
  if (!(energy_convergence > 0.0)) throw ValidationError("dmrg: energy_convergence must be > 0");
  if (!(truncation_cutoff >= 0.0)) throw ValidationError("dmrg: truncation_cutoff must be >= 0");
}

std::vector<int> default_chi_schedule(int cap) {
  if (cap < 1) throw ValidationError("chi cap must be >= 1");
  std::vector<int> out;
  for (int c = 32; c < cap; c *= 2) out.push_back(c);
  out.push_back(cap);
  return out;
}

double default_penalty_weight(const ExtendedHubbardModel& model) {
  double scale = 0.0;
  for (const Eigen::MatrixXd* m : {&model.u_onsite, &model.v_offsite, &model.t_intra, &model.t_onsite})
    if (m->size()) scale = std::max(scale, m->cwiseAbs().maxCoeff());
  return scale > 0.0 ? 10.0 * scale : 1.0;
}

namespace {

using T3 = Eigen::Tensor<double, 3>;
using T4 = Eigen::Tensor<double, 4>;
using detail::Pair;

template <class T>
const T& scheduled(const std::vector<T>& s, int sweep) {
  return s[std::min<std::size_t>(static_cast<std::size_t>(sweep), s.size() - 1)];
}

T3 site_from(const Eigen::MatrixXd& m, Eigen::Index left, Eigen::Index right) {
  T3 a(left, 2, right);
  std::copy(m.data(), m.data() + m.size(), a.data());
  return a;
}

// Effective two-site Hamiltonian on theta(l, p1, p2, r).
struct TwoSiteOperator {
  const T3& left;
  const T4& w1;
  const T4& w2;
  const T3& right;
  Eigen::Index l, r;

  void apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const {
    Eigen::TensorMap<const T4> th(in.data(), l, 2, 2, r);
    const Eigen::Tensor<double, 5> t1 = left.contract(th, std::array<Pair, 1>{Pair(2, 0)});
    const Eigen::Tensor<double, 5> t2 =
        t1.contract(w1, std::array<Pair, 2>{Pair(1, 0), Pair(2, 3)});  // (b, i2, r, w', o1)
    const Eigen::Tensor<double, 5> t3 =
        t2.contract(w2, std::array<Pair, 2>{Pair(3, 0), Pair(1, 3)});  // (b, r, o1, w'', o2)
    const T4 t4 = t3.contract(right, std::array<Pair, 2>{Pair(1, 2), Pair(3, 1)});  // (b, o1, o2, b')
    out.resize(in.size());
    std::copy(t4.data(), t4.data() + t4.size(), out.data());
  }

  // L W1 theta with rows (b + L * o1), for the left density matrix.
  Eigen::MatrixXd left_perturbation(const Eigen::VectorXd& theta) const {
    Eigen::TensorMap<const T4> th(theta.data(), l, 2, 2, r);
    const Eigen::Tensor<double, 5> t1 = left.contract(th, std::array<Pair, 1>{Pair(2, 0)});
    const Eigen::Tensor<double, 5> t2 =
        t1.contract(w1, std::array<Pair, 2>{Pair(1, 0), Pair(2, 3)});  // (b, i2, r, w', o1)
    const Eigen::Tensor<double, 5> p = t2.shuffle(std::array<int, 5>{0, 4, 3, 1, 2});
    return Eigen::Map<const Eigen::MatrixXd>(p.data(), 2 * l, p.size() / (2 * l));
  }

  // theta W2 R with columns (o2 + 2 * b'), for the right density matrix.
  Eigen::MatrixXd right_perturbation(const Eigen::VectorXd& theta) const {
    Eigen::TensorMap<const T4> th(theta.data(), l, 2, 2, r);
    const Eigen::Tensor<double, 5> s1 = th.contract(right, std::array<Pair, 1>{Pair(3, 2)});
    const Eigen::Tensor<double, 5> s2 =
        s1.contract(w2, std::array<Pair, 2>{Pair(2, 3), Pair(4, 1)});  // (l, p1, b', w, o2)
    const Eigen::Tensor<double, 5> p = s2.shuffle(std::array<int, 5>{0, 1, 3, 4, 2});
    return Eigen::Map<const Eigen::MatrixXd>(p.data(), p.size() / (2 * r), 2 * r);
  }
};

// Number of dominant eigenvalues (descending `w`) kept under the policy.
Eigen::Index kept_count(const Eigen::VectorXd& w, const TruncationPolicy& policy, double& dropped) {
  const double total = w.sum();
  Eigen::Index keep = 0;
  const Eigen::Index cap = std::min<Eigen::Index>(w.size(), policy.chi_max);
  while (keep < cap && total > 0.0 && w(keep) / total >= policy.cutoff) ++keep;
  keep = std::max<Eigen::Index>(keep, 1);
  dropped = total > 0.0 ? w.tail(w.size() - keep).sum() / total : 0.0;
  return keep;
}

// Density-matrix split with perturbation `alpha`; returns the discarded weight.
double noisy_split(MatrixProductState<double>& psi, int k, const Eigen::VectorXd& theta,
                   const TwoSiteOperator& op, double alpha, bool center_right) {
  const Eigen::Index l = op.l, r = op.r;
  const Eigen::Map<const Eigen::MatrixXd> th(theta.data(), 2 * l, 2 * r);
  Eigen::MatrixXd rho;
  if (center_right) {
    const Eigen::MatrixXd p = op.left_perturbation(theta);
    rho = th * th.transpose();
    const double pn = p.squaredNorm();
    if (pn > 0.0) rho.noalias() += (alpha / pn) * p * p.transpose();
  } else {
    const Eigen::MatrixXd p = op.right_perturbation(theta);
    rho = th.transpose() * th;
    const double pn = p.squaredNorm();
    if (pn > 0.0) rho.noalias() += (alpha / pn) * p.transpose() * p;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho);
  if (es.info() != Eigen::Success) throw NumericalError("dmrg: density matrix eigensolver failed");
  const Eigen::VectorXd w = es.eigenvalues().reverse().cwiseMax(0.0);
  double dropped = 0.0;
  const Eigen::Index keep = kept_count(w, psi.policy(), dropped);
  const Eigen::MatrixXd basis = es.eigenvectors().rowwise().reverse().leftCols(keep);
  if (center_right) {
    const Eigen::MatrixXd rest = basis.transpose() * th;  // keep x 2R
    psi.assign_site(k, site_from(basis, l, keep), k + 1);
    psi.assign_site(k + 1, site_from(rest, keep, r), k + 1);
  } else {
    const Eigen::MatrixXd rest = th * basis;  // 2L x keep
    const Eigen::MatrixXd bt = basis.transpose();
    psi.assign_site(k, site_from(rest, l, keep), k);
    psi.assign_site(k + 1, site_from(bt, keep, r), k);
  }
  return dropped;
}

}  // namespace

DmrgResult solve_ground_state(const MatrixProductOperator<double>& hamiltonian,
                              const DmrgConfig& config,
                              const MatrixProductState<double>& initial,
                              const SweepObserver& observer) {
  config.validate();
  const int n = hamiltonian.num_qubits();
  if (initial.num_qubits() != n)
    throw DimensionError(fmt::format("dmrg: operator has {} qubits, initial state {}", n,
                                     initial.num_qubits()));
  if (n < 2) throw DimensionError("dmrg needs at least two qubits");

  MatrixProductOperator<double> penalty_mpo;
  bool has_penalty = false;
  MatrixProductOperator<double> w = hamiltonian;
  if (!config.penalties.empty()) {
    PauliTermSum p{n, {}};
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    for (const auto& pen : config.penalties)
      if (pen.weight > 0.0)
        p += number_penalty(n, pen.qubits.empty() ? all : pen.qubits, pen.target, pen.weight);
    p.canonicalize();
    if (!p.terms.empty()) {
      penalty_mpo = assemble_mpo<double>(p);
      w = mpo_sum(hamiltonian, penalty_mpo);
      has_penalty = true;
    }
  }

  MatrixProductState<double> psi = initial;
  psi.set_policy({scheduled(config.chi_schedule, 0), config.truncation_cutoff});
  psi.move_center(0);
  psi.normalize();

  std::vector<T3> lenv(static_cast<std::size_t>(n + 1)), renv(static_cast<std::size_t>(n + 1));
  lenv[0] = detail::trivial_environment<double>();
  renv[static_cast<std::size_t>(n)] = detail::trivial_environment<double>();
  for (int k = n - 1; k >= 1; --k)
    renv[static_cast<std::size_t>(k)] =
        detail::extend_right(renv[static_cast<std::size_t>(k + 1)], psi.site(k), w.site(k));

  DmrgResult result;
  double best = std::numeric_limits<double>::infinity();
  MatrixProductState<double> best_state;
  double previous = std::numeric_limits<double>::quiet_NaN();
  bool previous_clean = false;

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss;
  for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
    const int chi = scheduled(config.chi_schedule, sweep);
    const double noise = scheduled(config.noise_schedule, sweep);
    psi.set_policy({chi, config.truncation_cutoff});
    SweepRecord rec;
    rec.sweep = sweep;
    rec.chi = chi;
    rec.noise = noise;
    rec.energy = std::numeric_limits<double>::infinity();

    auto local = [&](int k, bool center_right) {
      const auto ks = static_cast<std::size_t>(k);
      const TwoSiteOperator op{lenv[ks], w.site(k), w.site(k + 1), renv[ks + 2],
                               psi.site(k).dimension(0), psi.site(k + 1).dimension(2)};
      const Eigen::MatrixXd theta0 = psi.two_site_theta(k);
      Eigen::VectorXd start = theta0.reshaped();
      if (noise > 0.0) {
        // Lets the local solver leave eigenvectors of a (block-)diagonal H.
        Eigen::VectorXd kick(start.size());
        for (auto& x : kick) x = gauss(rng);
        start += std::sqrt(noise) * start.norm() / kick.norm() * kick;
      }
      auto eig = lanczos_ground_state<double>(
          [&op](const Eigen::VectorXd& in, Eigen::VectorXd& out) { op.apply(in, out); }, start,
          config.lanczos);
      rec.energy = eig.eigenvalue;
      double dropped = 0.0;
      if (noise > 0.0) {
        dropped = noisy_split(psi, k, eig.vector, op, noise, center_right);
      } else {
        const Eigen::MatrixXd theta =
            Eigen::Map<const Eigen::MatrixXd>(eig.vector.data(), theta0.rows(), theta0.cols());
        dropped = psi.split_two_site(k, theta, center_right).discarded;
      }
      rec.truncation_weight = std::max(rec.truncation_weight, dropped);
    };

    for (int k = 0; k + 1 < n; ++k) {
      local(k, true);
      lenv[static_cast<std::size_t>(k + 1)] =
          detail::extend_left(lenv[static_cast<std::size_t>(k)], psi.site(k), w.site(k));
    }
    for (int k = n - 2; k >= 0; --k) {
      local(k, false);
      renv[static_cast<std::size_t>(k + 1)] =
          detail::extend_right(renv[static_cast<std::size_t>(k + 2)], psi.site(k + 1), w.site(k + 1));
    }
    rec.max_bond_dim = psi.max_bond_dim();
    result.trace.push_back(rec);
    if (observer) observer(rec);
    spdlog::debug("dmrg sweep {}: E={:.12f} chi={} bond={} trunc={:.3e} noise={:.1e}", sweep,
                  rec.energy, chi, rec.max_bond_dim, rec.truncation_weight, noise);

    const bool clean = noise == 0.0 && chi == config.chi_schedule.back();
    if (clean && rec.energy < best) {
      best = rec.energy;
      best_state = psi;
    }
    if (clean && previous_clean && std::abs(rec.energy - previous) < config.energy_convergence) {
      result.converged = true;
      break;
    }
    previous = rec.energy;
    previous_clean = clean;
  }

  result.state = best_state.num_qubits() > 0 ? best_state : psi;
  result.state.normalize();
  result.energy = expectation_real(result.state, hamiltonian);
  if (has_penalty) {
    result.penalty_energy = expectation_real(result.state, penalty_mpo);
    result.penalty_satisfied = result.penalty_energy < 1e-6;
    if (!result.penalty_satisfied)
      spdlog::warn("dmrg: particle-number penalty not satisfied (<P> = {:.3e} eV)",
                   result.penalty_energy);
  }
  if (!result.converged)
    spdlog::warn("dmrg: not converged after {} sweeps", config.max_sweeps);
  return result;
}

namespace {

std::vector<int> bits_for(const ExtendedHubbardModel& model, const std::vector<int>& filling,
                          const QubitOrdering& ordering) {
  const int sites = model.num_sites();
  if (static_cast<int>(filling.size()) != model.bands)
    throw ValidationError(fmt::format("filling has {} entries for {} bands", filling.size(),
                                      model.bands));
  std::vector<int> by_path(static_cast<std::size_t>(sites));
  for (int s = 0; s < sites; ++s) by_path[static_cast<std::size_t>(ordering.path_position(s))] = s;
  std::vector<int> bits(static_cast<std::size_t>(ordering.num_qubits()), 0);
  for (int b = 0; b < model.bands; ++b) {
    const int f = filling[static_cast<std::size_t>(b)];
    if (f < 0 || f > 2 * sites)
      throw ValidationError(fmt::format("band {} filling {} outside [0, {}]", b, f, 2 * sites));
    const int doubles = std::max(0, f - sites);
    const int singles = f - 2 * doubles;
    for (int pos = 0; pos < doubles; ++pos) {
      const int s = by_path[static_cast<std::size_t>(pos)];
      bits[static_cast<std::size_t>(ordering.qubit(s, b, Spin::up))] = 1;
      bits[static_cast<std::size_t>(ordering.qubit(s, b, Spin::down))] = 1;
    }
    for (int j = 0; j < singles; ++j) {
      const int pos = doubles + j;
      const int s = by_path[static_cast<std::size_t>(pos)];
      bits[static_cast<std::size_t>(ordering.qubit(s, b, pos % 2 ? Spin::down : Spin::up))] = 1;
    }
  }
  return bits;
}

}  // namespace

std::vector<int> filling_bits(const ExtendedHubbardModel& model, const QubitOrdering& ordering) {
  return bits_for(model, model.filling, ordering);
}

DmrgResult noninteracting_ground_state(const ExtendedHubbardModel& model,
                                       const std::vector<int>& filling,
                                       const QubitOrdering& ordering, DmrgConfig config) {
  model.validate();
  const auto free = noninteracting(model);
  const auto h = assemble_mpo<double>(qubit_hamiltonian(free, ordering));
  const auto bits = bits_for(model, filling, ordering);
  config.penalties.clear();
  const double weight = default_penalty_weight(model);
  for (int b = 0; b < model.bands; ++b)
    config.penalties.push_back({ordering.band_qubits(b), filling[static_cast<std::size_t>(b)], weight});
  return solve_ground_state(
      h, config, MatrixProductState<double>::product_state(bits, {scheduled(config.chi_schedule, 0)}));
}

DmrgResult dmrg_ground_state(const ExtendedHubbardModel& model, const QubitOrdering& ordering,
                             DmrgConfig config, OnsitePotentialPolicy policy,
                             const SweepObserver& observer) {
  model.validate();
  const auto h = assemble_mpo<double>(qubit_hamiltonian(model, ordering, policy));
  if (config.penalties.empty())
    config.penalties.push_back({{}, model.num_electrons(), default_penalty_weight(model)});
  const auto bits = filling_bits(model, ordering);
  return solve_ground_state(
      h, config, MatrixProductState<double>::product_state(bits, {scheduled(config.chi_schedule, 0)}),
      observer);
}

}  // namespace dfvqe
