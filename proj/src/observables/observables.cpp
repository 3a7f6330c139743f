// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfvqe/observables/observables.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <numeric>
#include <type_traits>

#include <fmt/format.h>

#include "dfvqe/core/error.hpp"

namespace dfvqe {

namespace {

cx dense_expectation(const Eigen::VectorXcd& psi, const PauliString& p) {
  cx total = 0.0;
  for (Eigen::Index col = 0; col < psi.size(); ++col) {
    const auto s = static_cast<std::uint64_t>(col);
    total += std::conj(psi(static_cast<Eigen::Index>(s ^ p.x))) * apply_to_basis(p, s) * psi(col);
  }
  return total;
}

int dense_qubits(const Eigen::VectorXcd& psi) {
  const auto size = static_cast<std::uint64_t>(psi.size());
  if (size == 0 || (size & (size - 1)) != 0)
    throw DimensionError(fmt::format("dense state length {} is not a power of two", psi.size()));
  return std::countr_zero(size);
}

double checked_norm2(double n2) {
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw NumericalError("observable on a zero-norm state");
  return n2;
}

void check_site(const QubitOrdering& ordering, int site, int band) {
  if (site < 0 || site >= ordering.num_sites())
    throw DimensionError(
        fmt::format("site {} outside the {}-site lattice", site, ordering.num_sites()));
  if (band < 0 || band >= ordering.bands())
    throw DimensionError(fmt::format("band {} outside [0, {})", band, ordering.bands()));
}

PauliString z_of(int qubit) { return single_pauli(qubit, 'Z'); }

}  // namespace

StateView::StateView(const MatrixProductState<double>& psi)
    : state_(&psi), norm2_(checked_norm2(psi.norm() * psi.norm())) {}
StateView::StateView(const MatrixProductState<cx>& psi)
    : state_(&psi), norm2_(checked_norm2(psi.norm() * psi.norm())) {}
StateView::StateView(const SectorState& psi)
    : state_(&psi), norm2_(checked_norm2(psi.amplitudes.squaredNorm())) {}
StateView::StateView(const Eigen::VectorXcd& psi)
    : state_(&psi), norm2_(checked_norm2(psi.squaredNorm())) {
  dense_qubits(psi);
}

int StateView::num_qubits() const {
  return std::visit(
      [](const auto* s) -> int {
        using T = std::decay_t<decltype(*s)>;
        if constexpr (std::is_same_v<T, SectorState>)
          return s->basis.num_qubits();
        else if constexpr (std::is_same_v<T, Eigen::VectorXcd>)
          return dense_qubits(*s);
        else
          return s->num_qubits();
      },
      state_);
}

cx StateView::expectation(const PauliString& p) const {
  if (p.highest() >= num_qubits())
    throw DimensionError("expectation: Pauli string longer than the state");
  const cx raw = std::visit(
      [&p](const auto* s) -> cx {
        using T = std::decay_t<decltype(*s)>;
        if constexpr (std::is_same_v<T, Eigen::VectorXcd>)
          return dense_expectation(*s, p);
        else
          return pauli_expectation(*s, p);
      },
      state_);
  return raw / norm2_;
}

cx StateView::expectation(const PauliOperator& op) const {
  cx total = 0.0;
  for (const auto& [p, c] : op.terms()) total += c * expectation(p);
  return total;
}

double StateView::occupation(int qubit) const {
  return 0.5 * (1.0 - std::real(expectation(z_of(qubit))));
}

double spin_z(const StateView& psi, const QubitOrdering& ordering, int site, int band) {
  check_site(ordering, site, band);
  const int up = ordering.qubit(site, band, Spin::up);
  const int dn = ordering.qubit(site, band, Spin::down);
  // (n_up - n_dn) / 2 = (Z_dn - Z_up) / 4
  return 0.25 * std::real(psi.expectation(z_of(dn)) - psi.expectation(z_of(up)));
}

double spin_correlation(const StateView& psi, const QubitOrdering& ordering, int i, int j,
                        int band) {
  check_site(ordering, i, band);
  check_site(ordering, j, band);
  const int ui = ordering.qubit(i, band, Spin::up), di = ordering.qubit(i, band, Spin::down);
  const int uj = ordering.qubit(j, band, Spin::up), dj = ordering.qubit(j, band, Spin::down);
  auto zz = [&psi](int a, int b) {
    if (a == b) return 1.0;
    PauliString p = z_of(a);
    p.z |= std::uint64_t{1} << b;
    return std::real(psi.expectation(p));
  };
  // 16 S_i S_j = (Z_di - Z_ui)(Z_dj - Z_uj)
  const double ss = (zz(di, dj) - zz(di, uj) - zz(ui, dj) + zz(ui, uj)) / 16.0;
  return ss - spin_z(psi, ordering, i, band) * spin_z(psi, ordering, j, band);
}

std::vector<double> spin_correlation_row(const StateView& psi, const QubitOrdering& ordering,
                                         int i, int band) {
  std::vector<double> row;
  for (int j = 0; j < ordering.num_sites(); ++j) row.push_back(spin_correlation(psi, ordering, i, j, band));
  return row;
}

bool signs_alternate(const std::vector<double>& row, std::size_t from) {
  if (from >= row.size() || !(row[from] < 0.0)) return false;
  for (std::size_t j = from + 1; j < row.size(); ++j)
    if (!(row[j] * row[j - 1] < 0.0)) return false;
  return true;
}

std::vector<BandOccupation> band_occupations(const StateView& psi,
                                             const ExtendedHubbardModel& model,
                                             const QubitOrdering& ordering) {
  std::vector<BandOccupation> out;
  for (int b = 0; b < model.bands; ++b) {
    BandOccupation occ;
    occ.band = b;
    occ.reference = model.filling[static_cast<std::size_t>(b)];
    for (int s = 0; s < model.num_sites(); ++s) {
      occ.up += psi.occupation(ordering.qubit(s, b, Spin::up));
      occ.down += psi.occupation(ordering.qubit(s, b, Spin::down));
    }
    out.push_back(occ);
  }
  return out;
}

BandSplit default_band_split(const ExtendedHubbardModel& model) {
  std::vector<int> order(static_cast<std::size_t>(model.bands));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&model](int a, int b) {
    return model.t_onsite(a, a) < model.t_onsite(b, b);
  });
  const auto filled = std::count_if(model.filling.begin(), model.filling.end(),
                                    [](int f) { return f > 0; });
  BandSplit split;
  for (std::size_t k = 0; k < order.size(); ++k)
    (static_cast<long>(k) < filled ? split.valence : split.conduction).push_back(order[k]);
  return split;
}

std::string to_string(UPrimeAveraging averaging) {
  return averaging == UPrimeAveraging::valence_conduction ? "valence_conduction" : "all_pairs";
}

UPrimeAveraging parse_uprime_averaging(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "valence_conduction" || s == "vc") return UPrimeAveraging::valence_conduction;
  if (s == "all_pairs" || s == "all") return UPrimeAveraging::all_pairs;
  throw ValidationError(fmt::format("unknown U' averaging '{}'", text));
}

double mean_interband_repulsion(const ExtendedHubbardModel& model, const BandSplit& split,
                                UPrimeAveraging averaging) {
  double sum = 0.0;
  int count = 0;
  if (averaging == UPrimeAveraging::all_pairs) {
    for (int a = 0; a < model.bands; ++a)
      for (int b = 0; b < model.bands; ++b)
        if (a != b) {
          sum += model.u_onsite(a, b);
          ++count;
        }
  } else {
    for (int v : split.valence)
      for (int c : split.conduction) {
        sum += model.u_onsite(v, c);
        ++count;
      }
  }
  if (count == 0) throw ValidationError("U' needs at least one inter-band pair");
  return sum / count;
}

ExcitonicOrder ei_order_parameter(const StateView& psi, const ExtendedHubbardModel& model,
                                  const QubitOrdering& ordering, const BandSplit& split,
                                  UPrimeAveraging averaging) {
  if (split.valence.empty() || split.conduction.empty())
    throw ValidationError("excitonic order parameter needs valence and conduction bands");
  for (int b : split.valence)
    if (b < 0 || b >= model.bands) throw DimensionError(fmt::format("band {} out of range", b));
  for (int b : split.conduction)
    if (b < 0 || b >= model.bands) throw DimensionError(fmt::format("band {} out of range", b));
  FermionOperator op;
  op.num_qubits = ordering.num_qubits();
  for (int s = 0; s < model.num_sites(); ++s)
    for (Spin spin : {Spin::up, Spin::down})
      for (int v : split.valence)
        for (int c : split.conduction)
          op.terms.push_back(
              {1.0, {{ordering.qubit(s, c, spin), true}, {ordering.qubit(s, v, spin), false}}});
  ExcitonicOrder out;
  out.coherence = psi.expectation(jordan_wigner(op));
  out.u_prime = mean_interband_repulsion(model, split, averaging);
  out.delta = std::abs(out.coherence) * out.u_prime / model.num_sites();
  return out;
}

ChargeOrder charge_disproportionation(const StateView& psi, const ExtendedHubbardModel& model,
                                      const QubitOrdering& ordering) {
  ChargeOrder out;
  for (int s = 0; s < model.num_sites(); ++s) {
    double charge = 0.0;
    for (int b = 0; b < model.bands; ++b)
      for (Spin spin : {Spin::up, Spin::down}) charge += psi.occupation(ordering.qubit(s, b, spin));
    out.site_charge.push_back(charge);
    const bool a = (model.lattice.x_of(s) + model.lattice.y_of(s)) % 2 == 0;
    (a ? out.sublattice_a : out.sublattice_b) += charge;
  }
  out.phi = std::abs(out.sublattice_a - out.sublattice_b) / model.num_sites();
  return out;
}

ObservableReport observe(const StateView& psi, const ExtendedHubbardModel& model,
                         const QubitOrdering& ordering, UPrimeAveraging averaging) {
  if (psi.num_qubits() != model.num_spin_orbitals())
    throw DimensionError("observe: state and model disagree on the qubit count");
  ObservableReport r;
  r.spin_correlations = spin_correlation_row(psi, ordering, 0);
  for (int s = 0; s < model.num_sites(); ++s) r.spin_z.push_back(spin_z(psi, ordering, s));
  r.bands = band_occupations(psi, model, ordering);
  if (model.bands > 1)
    r.excitonic = ei_order_parameter(psi, model, ordering, default_band_split(model), averaging);
  r.charge = charge_disproportionation(psi, model, ordering);
  return r;
}

}  // namespace dfvqe
