// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "dfvqe/ed/ed.hpp"
#include "dfvqe/encode/jordan_wigner.hpp"
#include "dfvqe/encode/ordering.hpp"
#include "dfvqe/model/model.hpp"
#include "dfvqe/tensor/mps.hpp"

namespace dfvqe {

/// Non-owning view of a state that evaluates normalised Pauli expectations.
/// The viewed state must outlive the view.
class StateView {
 public:
  StateView(const MatrixProductState<double>& psi);  // NOLINT(google-explicit-constructor)
  StateView(const MatrixProductState<cx>& psi);      // NOLINT(google-explicit-constructor)
  StateView(const SectorState& psi);                 // NOLINT(google-explicit-constructor)
  /// Dense 2^n amplitudes, qubit 0 = least significant bit.
  StateView(const Eigen::VectorXcd& psi);  // NOLINT(google-explicit-constructor)

  int num_qubits() const;
  /// <psi|P|psi> / <psi|psi>.
  cx expectation(const PauliString& p) const;
  cx expectation(const PauliOperator& op) const;
  /// <n_q>.
  double occupation(int qubit) const;

 private:
  std::variant<const MatrixProductState<double>*, const MatrixProductState<cx>*,
               const SectorState*, const Eigen::VectorXcd*>
      state_;
  double norm2_ = 1.0;
};

/// <S^z> of one (site, band), S^z = (n_up - n_dn) / 2.
double spin_z(const StateView& psi, const QubitOrdering& ordering, int site, int band = 0);

/// Connected correlator <S^z_i S^z_j> - <S^z_i><S^z_j> on one band.
double spin_correlation(const StateView& psi, const QubitOrdering& ordering, int i, int j,
                        int band = 0);

/// C_{i,j} for every site j.
std::vector<double> spin_correlation_row(const StateView& psi, const QubitOrdering& ordering,
                                         int i, int band = 0);

/// True when row[from] < 0 and the signs of row[from..] alternate strictly.
bool signs_alternate(const std::vector<double>& row, std::size_t from = 1);

struct BandOccupation {
  int band = 0;
  double up = 0.0;
  double down = 0.0;
  double reference = 0.0;  // band-insulator filling
  double total() const noexcept { return up + down; }
  /// reference - measured: positive for holes, negative for added electrons.
  double delta_n_el() const noexcept { return reference - total(); }
};

std::vector<BandOccupation> band_occupations(const StateView& psi,
                                             const ExtendedHubbardModel& model,
                                             const QubitOrdering& ordering);

struct BandSplit {
  std::vector<int> valence;
  std::vector<int> conduction;
};

/// Bands sorted by on-site energy t_onsite(b, b); the lowest k are valence,
/// with k the number of bands the reference filling occupies. Ties keep the
/// band index order.
BandSplit default_band_split(const ExtendedHubbardModel& model);

enum class UPrimeAveraging { valence_conduction, all_pairs };

std::string to_string(UPrimeAveraging averaging);
UPrimeAveraging parse_uprime_averaging(std::string_view text);

/// Mean of u_onsite(v, c) over the split's v-c pairs, or over every
/// off-diagonal entry.
double mean_interband_repulsion(const ExtendedHubbardModel& model, const BandSplit& split,
                                UPrimeAveraging averaging = UPrimeAveraging::valence_conduction);

struct ExcitonicOrder {
  cx coherence = 0.0;  // sum over sites, spins and v-c pairs of <c+_c c_v>
  double u_prime = 0.0;
  double delta = 0.0;  // |coherence| * u_prime / N_sites
};

ExcitonicOrder ei_order_parameter(const StateView& psi, const ExtendedHubbardModel& model,
                                  const QubitOrdering& ordering, const BandSplit& split,
                                  UPrimeAveraging averaging = UPrimeAveraging::valence_conduction);

struct ChargeOrder {
  double sublattice_a = 0.0;  // (x + y) even
  double sublattice_b = 0.0;
  double phi = 0.0;  // |A - B| / (N_x N_y)
  std::vector<double> site_charge;
};

ChargeOrder charge_disproportionation(const StateView& psi, const ExtendedHubbardModel& model,
                                      const QubitOrdering& ordering);

struct ObservableReport {
  std::vector<double> spin_correlations;  // C_{0,j}, band 0
  std::vector<double> spin_z;             // <S^z_j>, band 0
  std::vector<BandOccupation> bands;
  ExcitonicOrder excitonic;  // zero when the model has a single band
  ChargeOrder charge;
};

ObservableReport observe(const StateView& psi, const ExtendedHubbardModel& model,
                         const QubitOrdering& ordering,
                         UPrimeAveraging averaging = UPrimeAveraging::valence_conduction);

}  // namespace dfvqe
