// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dfvqe/dmrg/dmrg.hpp"
#include "dfvqe/vqe/ansatz.hpp"
#include "dfvqe/vqe/simulator.hpp"

namespace dfvqe {

enum class Phase2 { overlap_infidelity, none };

std::string to_string(Phase2 phase);
Phase2 parse_phase2(std::string_view text);

struct OptimizerConfig {
  int restarts = 10;
  double init_std = std::sqrt(1e-5);  // theta ~ N(0, 1e-5) (variance)
  double energy_tol = 1e-7;           // |objective change| per iteration
  double grad_tol = 1e-6;             // max-norm of the gradient
  int max_iters = 500;
  int lbfgs_memory = 500;  // correction pairs kept by L-BFGS
  Phase2 phase2 = Phase2::overlap_infidelity;
  std::uint64_t seed = 0;  // restart r draws from seed ^ r
  GradientMethod gradient = GradientMethod::automatic;
  double fd_step = 1e-6;

  void validate() const;
};

enum class Termination {
  energy_tolerance,
  gradient_tolerance,
  max_iterations,
  already_converged,  // overlap phase started at the infidelity floor
  line_search_failure,
  numerical_failure,
};

std::string to_string(Termination reason);

struct PhaseOutcome {
  Eigen::VectorXd parameters;  // best point evaluated
  double initial_value = 0.0;  // energy (eV) or fidelity at the start
  double value = 0.0;          // energy (eV) or fidelity at `parameters`
  int iterations = 0;
  int evaluations = 0;
  Termination termination = Termination::max_iterations;
  std::vector<double> trace;  // optimiser objective after each iteration
};

struct RestartRecord {
  int restart = 0;
  std::uint64_t seed = 0;
  PhaseOutcome energy_phase;
  std::optional<PhaseOutcome> overlap_phase;
  double energy = 0.0;
  double fidelity = std::numeric_limits<double>::quiet_NaN();  // NaN without a reference
  int iterations = 0;  // both phases
  Termination termination = Termination::max_iterations;  // of the last phase run
};

struct VqeResult {
  double best_energy = 0.0;
  double best_fidelity = std::numeric_limits<double>::quiet_NaN();
  int best_restart = -1;
  Eigen::VectorXd best_parameters;
  std::vector<RestartRecord> restarts;
  double initial_energy = 0.0;  // circuit at theta = 0
  double reference_energy = std::numeric_limits<double>::quiet_NaN();
  std::string backend;
  int num_parameters = 0;
  int two_qubit_gates = 0;
};

using RestartObserver = std::function<void(const RestartRecord&)>;

/// N(0, init_std^2) draw for restart `restart`, from mt19937_64(seed ^ restart).
Eigen::VectorXd initial_parameters(int count, const OptimizerConfig& config, int restart);

/// L-BFGS on the energy from `theta0`; stops on the energy, gradient or
/// iteration criterion. Returns the lowest-energy point evaluated.
PhaseOutcome energy_phase(const CircuitBackend& backend, const Eigen::VectorXd& theta0,
                          const OptimizerConfig& config);

/// L-BFGS on log10(1 - F), F = |<ref|psi>|^2, floored at 1 - F = 1e-16.
/// Returns the highest-fidelity point evaluated, so F never drops below
/// its starting value.
PhaseOutcome overlap_phase(const CircuitBackend& backend, const Eigen::VectorXd& theta0,
                           const OptimizerConfig& config);

/// Energy phase (and overlap phase when configured and a reference exists)
/// for every restart; the best restart is the lowest final energy.
VqeResult run_restarts(const CircuitBackend& backend, const OptimizerConfig& config,
                       const RestartObserver& observer = {});

enum class BackendKind { automatic, sector, mps };

std::string to_string(BackendKind kind);
BackendKind parse_backend_kind(std::string_view text);

struct VqeSetup {
  BackendKind backend = BackendKind::automatic;
  /// Largest particle-number sector simulated exactly under `automatic`.
  double sector_limit = 4.0e6;
  /// MPS bond cap; 0 selects max_chi_default(n_q), capped at 512 from 32 qubits.
  int chi = 0;
  DmrgConfig dmrg;
  OnsitePotentialPolicy policy = OnsitePotentialPolicy::automatic;
  bool compute_reference = true;
  /// Reused as the reference instead of a fresh DMRG run when set.
  const DmrgResult* reference = nullptr;
};

/// MPS bond cap used when `VqeSetup::chi` is 0.
int default_vqe_chi(int num_qubits);

/// C(n, k) as a double.
double sector_dimension(int num_qubits, int num_particles);

/// Circuit backend for `model` starting from `initial`, with an optional
/// fidelity reference. Both states must be normalised.
std::unique_ptr<CircuitBackend> make_backend(const ExtendedHubbardModel& model,
                                             const QubitOrdering& ordering,
                                             const AnsatzSpec& ansatz,
                                             const MatrixProductState<double>& initial,
                                             const MatrixProductState<double>* reference,
                                             const VqeSetup& setup, const OptimizerConfig& config);

struct VqeRun {
  VqeResult result;
  std::optional<DmrgResult> reference;
  DmrgResult initial_state;
  std::unique_ptr<CircuitBackend> backend;
};

/// DMRG reference, noninteracting initial state, then `run_restarts`.
VqeRun run_vqe(const ExtendedHubbardModel& model, const QubitOrdering& ordering,
               const AnsatzSpec& ansatz, const OptimizerConfig& config,
               const VqeSetup& setup = {}, const RestartObserver& observer = {});

}  // namespace dfvqe
