// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dfvqe/model/lattice.hpp"

namespace dfvqe {

/// Downfolded extended-Hubbard Hamiltonian restricted to nearest neighbours.
///
///   H = sum_sigma sum_<RR'> sum_i t_intra(i,i) (a+_iR a_iR' + h.c.)
///     + sum_sigma sum_R sum_ij t_onsite(i,j) a+_iR a_jR
///     + sum_R sum_i U(i,i) n_iRup n_iRdn + sum_R sum_{i!=j} U(i,j)/2 n_iR n_jR
///     + sum_<RR'> sum_ij V(i,j) n_iR n_jR'
///
/// All energies are in eV. `filling[b]` is the number of electrons (both
/// spins) placed in band b by the reference band-insulating state.
struct ExtendedHubbardModel {
  std::string name;
  LatticeSpec lattice;
  int bands = 1;
  Eigen::MatrixXd t_intra;    // nearest-neighbour hopping; diagonal used
  Eigen::MatrixXd t_onsite;   // diagonal: on-site potential, off-diagonal: same-site inter-band
  Eigen::MatrixXd u_onsite;   // diagonal: U, off-diagonal: U'
  Eigen::MatrixXd v_offsite;  // V(i,j) couples band i at R with band j at the +x/+y neighbour R'
  std::vector<int> filling;
  /// Per-direction multipliers applied to hopping and V along x and y.
  std::array<double, 2> direction_scale{1.0, 1.0};

  int num_sites() const noexcept { return lattice.num_sites(); }
  int num_spin_orbitals() const noexcept { return 2 * lattice.num_sites() * bands; }
  int num_electrons() const;

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;
};

/// Copy of `model` on a different lattice. Per-band fillings are rescaled by
/// the site count and must stay integral.
ExtendedHubbardModel with_lattice(const ExtendedHubbardModel& model, int nx, int ny);

/// Copy with every U, U' and V set to zero.
ExtendedHubbardModel noninteracting(const ExtendedHubbardModel& model);

/// Copy keeping only the first `bands` bands (leading sub-blocks of every matrix).
ExtendedHubbardModel with_bands(const ExtendedHubbardModel& model, int bands);

/// Parses a model document. Errors carry line and field context.
ExtendedHubbardModel parse_model(const std::string& text);

/// Reads and parses a model file.
ExtendedHubbardModel load_model(const std::filesystem::path& path);

/// Serialises to the same document format `parse_model` reads.
std::string dump_model(const ExtendedHubbardModel& model);

}  // namespace dfvqe
