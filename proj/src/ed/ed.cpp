// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfvqe/ed/ed.hpp"

#include <algorithm>
#include <array>
#include <bit>

#include <fmt/format.h>

#include "dfvqe/core/error.hpp"
#include "dfvqe/core/lanczos.hpp"

namespace dfvqe {

FockBasis::FockBasis(int num_qubits, int num_particles)
    : num_qubits_(num_qubits), num_particles_(num_particles) {
  if (num_qubits < 0 || num_qubits > 63)
    throw DimensionError(fmt::format("FockBasis: {} qubits unsupported", num_qubits));
  if (num_particles < 0 || num_particles > num_qubits)
    throw DimensionError(
        fmt::format("FockBasis: {} particles in {} orbitals", num_particles, num_qubits));
  if (num_particles == 0) {
    states_.push_back(0);
    return;
  }
  const std::uint64_t limit = std::uint64_t{1} << num_qubits;
  std::uint64_t v = (std::uint64_t{1} << num_particles) - 1;
  while (v < limit) {
    states_.push_back(v);
    // Next pattern with the same popcount.
    const std::uint64_t t = v | (v - 1);
    v = (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
  }
}

Eigen::Index FockBasis::index(std::uint64_t pattern) const noexcept {
  const auto it = std::lower_bound(states_.begin(), states_.end(), pattern);
  if (it == states_.end() || *it != pattern) return -1;
  return static_cast<Eigen::Index>(it - states_.begin());
}

bool apply_ladder(const Ladder& op, std::uint64_t& pattern, int& sign) noexcept {
  const std::uint64_t bit = std::uint64_t{1} << op.qubit;
  const bool occupied = (pattern & bit) != 0;
  if (occupied == op.dagger) return false;
  if (std::popcount(pattern & (bit - 1)) & 1) sign = -sign;
  pattern ^= bit;
  return true;
}

namespace {

struct Product {
  double coefficient = 0.0;
  int length = 0;
  std::array<Ladder, 4> ops{};
};

// Hubbard terms as ladder products, built without reference to the qubit
// encoding so that the two constructions can be compared.
std::vector<Product> ladder_products(const TermList& terms, const QubitOrdering& ordering) {
  std::vector<Product> out;
  auto qb = [&](int site, int band, Spin s) { return ordering.qubit(site, band, s); };
  auto hop = [&](double c, int p, int r) {
    out.push_back({c, 2, {Ladder{p, true}, Ladder{r, false}}});
  };
  auto dens = [&](double c, int a, int b) {
    out.push_back({c, 4, {Ladder{a, true}, Ladder{a, false}, Ladder{b, true}, Ladder{b, false}}});
  };
  for (const auto& t : terms) {
    if (t.coefficient == 0.0) continue;
    switch (t.kind) {
      case TermKind::hop_intra:
      case TermKind::hop_inter_onsite:
      case TermKind::onsite_potential: {
        const Spin s = t.spin == SpinPattern::down ? Spin::down : Spin::up;
        const int p = qb(t.site_i, t.band_i, s);
        const int r = qb(t.site_j, t.band_j, s);
        hop(t.coefficient, p, r);
        if (t.includes_conjugate) hop(t.coefficient, r, p);
        break;
      }
      case TermKind::u_onsite:
        dens(t.coefficient, qb(t.site_i, t.band_i, Spin::up), qb(t.site_i, t.band_i, Spin::down));
        break;
      case TermKind::u_inter_onsite:
      case TermKind::v_offsite:
        for (auto s1 : {Spin::up, Spin::down})
          for (auto s2 : {Spin::up, Spin::down})
            dens(t.coefficient, qb(t.site_i, t.band_i, s1), qb(t.site_j, t.band_j, s2));
        break;
    }
  }
  return out;
}

bool apply_product(const Product& p, std::uint64_t& pattern, int& sign) {
  for (int k = p.length - 1; k >= 0; --k)
    if (!apply_ladder(p.ops[static_cast<std::size_t>(k)], pattern, sign)) return false;
  return true;
}

}  // namespace

Eigen::SparseMatrix<double> sector_hamiltonian(const TermList& terms,
                                               const QubitOrdering& ordering,
                                               const FockBasis& basis) {
  if (basis.num_qubits() != ordering.num_qubits())
    throw DimensionError(fmt::format("basis has {} qubits, ordering {}", basis.num_qubits(),
                                     ordering.num_qubits()));
  const auto products = ladder_products(terms, ordering);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(basis.dimension()) * 8);
  for (Eigen::Index col = 0; col < basis.dimension(); ++col) {
    for (const auto& p : products) {
      std::uint64_t s = basis.state(col);
      int sign = 1;
      if (!apply_product(p, s, sign)) continue;
      const Eigen::Index row = basis.index(s);
      if (row < 0) throw NumericalError("sector_hamiltonian: term leaves the particle sector");
      triplets.emplace_back(row, col, sign * p.coefficient);
    }
  }
  Eigen::SparseMatrix<double> h(basis.dimension(), basis.dimension());
  h.setFromTriplets(triplets.begin(), triplets.end());
  h.makeCompressed();
  return h;
}

Eigen::MatrixXd full_hamiltonian(const TermList& terms, const QubitOrdering& ordering) {
  const int n = ordering.num_qubits();
  if (n > 12) throw DimensionError(fmt::format("full_hamiltonian limited to 12 qubits (got {})", n));
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  const auto products = ladder_products(terms, ordering);
  for (Eigen::Index col = 0; col < dim; ++col)
    for (const auto& p : products) {
      auto s = static_cast<std::uint64_t>(col);
      int sign = 1;
      if (apply_product(p, s, sign)) h(static_cast<Eigen::Index>(s), col) += sign * p.coefficient;
    }
  return h;
}

EdResult ed_ground_state(const ExtendedHubbardModel& model, int num_electrons,
                         const EdOptions& options) {
  model.validate();
  const auto ordering = build_ordering(model, options.scheme);
  const int n = ordering.num_qubits();
  if (n > kEdMaxQubits)
    throw DimensionError(
        fmt::format("exact diagonalisation is capped at {} qubits (model needs {})", kEdMaxQubits, n));
  if (num_electrons < 0 || num_electrons > n)
    throw DimensionError(fmt::format("invalid sector: {} electrons in {} spin-orbitals",
                                     num_electrons, n));
  EdResult result;
  result.basis = FockBasis(n, num_electrons);
  const auto h = sector_hamiltonian(expand_terms(model, options.onsite_policy), ordering, result.basis);
  const Eigen::Index dim = result.basis.dimension();
  if (dim <= options.dense_limit) {
    const Eigen::MatrixXd dense = h;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    if (es.info() != Eigen::Success) throw NumericalError("ed: dense eigensolver failed");
    result.energy = es.eigenvalues()(0);
    result.amplitudes = es.eigenvectors().col(0);
  } else {
    Eigen::VectorXd start(dim);
    for (Eigen::Index i = 0; i < dim; ++i) start(i) = 1.0 + 1e-3 * static_cast<double>(i % 17);
    LanczosOptions lo;
    lo.tolerance = options.tolerance;
    lo.max_krylov = 100;
    lo.max_restarts = 200;
    auto r = lanczos_ground_state<double>(
        [&h](const Eigen::VectorXd& in, Eigen::VectorXd& out) { out.noalias() = h * in; }, start, lo);
    result.energy = r.eigenvalue;
    result.amplitudes = r.vector;
    result.converged = r.converged;
  }
  return result;
}

namespace {

template <class Vec>
cx expectation_impl(const FockBasis& basis, const Vec& psi, const FermionOperator& op) {
  if (psi.size() != basis.dimension())
    throw DimensionError(fmt::format("vector length {} vs sector dimension {}", psi.size(),
                                     basis.dimension()));
  if (op.num_qubits != basis.num_qubits())
    throw DimensionError("observable and basis act on different registers");
  cx total = 0.0;
  for (const auto& term : op.terms) {
    int balance = 0;
    for (const auto& l : term.ops) {
      if (l.qubit < 0 || l.qubit >= basis.num_qubits())
        throw std::out_of_range(fmt::format("observable qubit {} out of range", l.qubit));
      balance += l.dagger ? 1 : -1;
    }
    if (balance != 0)
      throw ValidationError("ed_expectation: operator does not conserve particle number");
    for (Eigen::Index col = 0; col < basis.dimension(); ++col) {
      std::uint64_t s = basis.state(col);
      int sign = 1;
      bool alive = true;
      for (auto it = term.ops.rbegin(); it != term.ops.rend() && alive; ++it)
        alive = apply_ladder(*it, s, sign);
      if (!alive) continue;
      const Eigen::Index row = basis.index(s);
      total += term.coefficient * static_cast<double>(sign) * std::conj(cx(psi(row))) * cx(psi(col));
    }
  }
  return total;
}

}  // namespace

cx ed_expectation(const FockBasis& basis, const Eigen::VectorXcd& psi, const FermionOperator& op) {
  return expectation_impl(basis, psi, op);
}

cx ed_expectation(const FockBasis& basis, const Eigen::VectorXd& psi, const FermionOperator& op) {
  return expectation_impl(basis, psi, op);
}

FermionOperator number_op(int num_qubits, int qubit) {
  return {num_qubits, {{1.0, {Ladder{qubit, true}, Ladder{qubit, false}}}}};
}

Eigen::VectorXcd restrict_to_sector(const FockBasis& basis, const Eigen::VectorXcd& dense) {
  if (dense.size() != (Eigen::Index{1} << basis.num_qubits()))
    throw DimensionError(fmt::format("dense vector of length {} for {} qubits", dense.size(),
                                     basis.num_qubits()));
  Eigen::VectorXcd out(basis.dimension());
  for (Eigen::Index i = 0; i < basis.dimension(); ++i)
    out(i) = dense(static_cast<Eigen::Index>(basis.state(i)));
  return out;
}

cx pauli_expectation(const SectorState& psi, const PauliString& p) {
  const auto& basis = psi.basis;
  if (psi.amplitudes.size() != basis.dimension())
    throw DimensionError("sector state amplitudes do not match the basis");
  if (p.highest() >= basis.num_qubits())
    throw DimensionError("pauli_expectation: string longer than the register");
  cx total = 0.0;
  for (Eigen::Index col = 0; col < basis.dimension(); ++col) {
    const std::uint64_t s = basis.state(col);
    const Eigen::Index row = p.x == 0 ? col : basis.index(s ^ p.x);
    if (row < 0) continue;
    total += std::conj(psi.amplitudes(row)) * apply_to_basis(p, s) * psi.amplitudes(col);
  }
  return total;
}

}  // namespace dfvqe
