// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dfvqe/core/lanczos.hpp"
#include "dfvqe/encode/mpo.hpp"
#include "dfvqe/encode/ordering.hpp"
#include "dfvqe/model/model.hpp"
#include "dfvqe/model/terms.hpp"
#include "dfvqe/tensor/mps.hpp"

namespace dfvqe {

/// weight * (N_S - target)^2 where N_S counts the qubits in `qubits` (all
/// qubits when empty).
struct NumberPenalty {
  std::vector<int> qubits;
  int target = 0;
  double weight = 0.0;
};

struct DmrgConfig {
  int max_sweeps = 50;
  /// Bond cap per sweep; the last entry repeats.
  std::vector<int> chi_schedule = {32, 64, 128, 256, 512};
  double energy_convergence = 1e-8;
  /// Density-matrix perturbation per sweep; the last entry repeats.
  std::vector<double> noise_schedule = {1e-4, 1e-5, 1e-6, 1e-7, 0.0};
  std::vector<NumberPenalty> penalties;
  double truncation_cutoff = 1e-12;
  LanczosOptions lanczos{24, 3, 1e-10};
  /// Seeds the random start-vector perturbation used while noise is on.
  std::uint64_t seed = 0;

  /// Throws ValidationError on empty schedules, chi < 1, negative noise or weight.
  void validate() const;
};

/// 32, 64, ... doubling up to `cap` (inclusive; `cap` alone when below 32).
std::vector<int> default_chi_schedule(int cap);

/// 10 times the largest coupling magnitude (U, U', V, t); 1 eV for an all-zero
/// model. Equals 10 * max|U| whenever U dominates.
double default_penalty_weight(const ExtendedHubbardModel& model);

struct SweepRecord {
  int sweep = 0;
  double energy = 0.0;  // lowest local eigenvalue, penalty included
  int max_bond_dim = 0;
  double truncation_weight = 0.0;  // largest single-bond discarded weight
  int chi = 0;
  double noise = 0.0;
};

struct DmrgResult {
  double energy = 0.0;  // <H> of the returned normalized state, penalty excluded
  MatrixProductState<double> state;
  std::vector<SweepRecord> trace;
  bool converged = false;
  double penalty_energy = 0.0;  // <penalty> of the returned state
  bool penalty_satisfied = true;  // penalty_energy < 1e-6 eV
};

using SweepObserver = std::function<void(const SweepRecord&)>;

/// Real two-site DMRG. `hamiltonian` and `initial` must share the qubit count.
DmrgResult solve_ground_state(const MatrixProductOperator<double>& hamiltonian,
                              const DmrgConfig& config,
                              const MatrixProductState<double>& initial,
                              const SweepObserver& observer = {});

/// Occupation bits for the per-band filling: band b's electrons go on the
/// sites in path order, alternating spin, doubly occupying from the start of
/// the path once every site holds one.
std::vector<int> filling_bits(const ExtendedHubbardModel& model, const QubitOrdering& ordering);

/// Ground state of `model` with every U, U' and V set to zero, with a penalty
/// pinning each band's electron count to `filling`.
DmrgResult noninteracting_ground_state(const ExtendedHubbardModel& model,
                                       const std::vector<int>& filling,
                                       const QubitOrdering& ordering,
                                       DmrgConfig config = {});

/// Full pipeline for a model: JW Hamiltonian, MPO, total-number penalty at
/// default weight (unless `config.penalties` is set), filling product state.
DmrgResult dmrg_ground_state(const ExtendedHubbardModel& model, const QubitOrdering& ordering,
                             DmrgConfig config = {},
                             OnsitePotentialPolicy policy = OnsitePotentialPolicy::automatic,
                             const SweepObserver& observer = {});

}  // namespace dfvqe
