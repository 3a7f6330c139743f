// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "dfvqe/encode/jordan_wigner.hpp"
#include "dfvqe/encode/ordering.hpp"
#include "dfvqe/model/terms.hpp"

namespace dfvqe {

/// Hard cap on the exact-diagonalisation register.
inline constexpr int kEdMaxQubits = 16;

/// Occupation patterns with a fixed particle number, in increasing order.
/// Bit q is spin-orbital q of the associated QubitOrdering.
class FockBasis {
 public:
  FockBasis(int num_qubits, int num_particles);

  int num_qubits() const noexcept { return num_qubits_; }
  int num_particles() const noexcept { return num_particles_; }
  Eigen::Index dimension() const noexcept { return static_cast<Eigen::Index>(states_.size()); }
  std::uint64_t state(Eigen::Index i) const { return states_[static_cast<std::size_t>(i)]; }
  const std::vector<std::uint64_t>& states() const noexcept { return states_; }
  /// Index of `pattern`, or -1 if it is not in the sector.
  Eigen::Index index(std::uint64_t pattern) const noexcept;

 private:
  int num_qubits_;
  int num_particles_;
  std::vector<std::uint64_t> states_;
};

/// Applies a ladder operator to a basis pattern. Returns false if the result
/// vanishes; otherwise updates `pattern` and multiplies `sign` by
/// (-1)^(number of occupied orbitals below the target).
bool apply_ladder(const Ladder& op, std::uint64_t& pattern, int& sign) noexcept;

/// Sector Hamiltonian assembled directly from the fermionic term list.
Eigen::SparseMatrix<double> sector_hamiltonian(const TermList& terms,
                                               const QubitOrdering& ordering,
                                               const FockBasis& basis);

/// Full 2^n x 2^n Hamiltonian (every particle number); limited to 12 qubits.
Eigen::MatrixXd full_hamiltonian(const TermList& terms, const QubitOrdering& ordering);

struct EdResult {
  double energy = 0.0;
  Eigen::VectorXd amplitudes;
  FockBasis basis{0, 0};
  bool converged = true;
};

struct EdOptions {
  SpinScheme scheme = SpinScheme::spin_interleaved;
  OnsitePotentialPolicy onsite_policy = OnsitePotentialPolicy::automatic;
  /// Sectors up to this dimension are diagonalised densely.
  Eigen::Index dense_limit = 2000;
  double tolerance = 1e-12;
};

/// Lowest eigenpair in the N_e-electron sector. Throws DimensionError above
/// kEdMaxQubits or for an invalid sector.
EdResult ed_ground_state(const ExtendedHubbardModel& model, int num_electrons,
                         const EdOptions& options = {});

/// <psi| op |psi> for a sector vector. Each term must conserve particle
/// number; other operators raise ValidationError.
cx ed_expectation(const FockBasis& basis, const Eigen::VectorXcd& psi, const FermionOperator& op);
cx ed_expectation(const FockBasis& basis, const Eigen::VectorXd& psi, const FermionOperator& op);

/// Number operator n_q as a fermion operator.
FermionOperator number_op(int num_qubits, int qubit);

/// State vector restricted to one particle-number sector.
struct SectorState {
  FockBasis basis{0, 0};
  Eigen::VectorXcd amplitudes;
};

/// Amplitudes of a dense 2^n vector (qubit 0 = least significant bit) on the
/// sector patterns. Weight outside the sector is dropped.
Eigen::VectorXcd restrict_to_sector(const FockBasis& basis, const Eigen::VectorXcd& dense);

/// <psi|P|psi> for a sector state; strings leaving the sector contribute 0.
cx pauli_expectation(const SectorState& psi, const PauliString& p);

}  // namespace dfvqe
