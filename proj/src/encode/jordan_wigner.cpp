// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfvqe/encode/jordan_wigner.hpp"

#include <fmt/format.h>

#include "dfvqe/core/error.hpp"

namespace dfvqe {

namespace {

constexpr Spin kSpins[] = {Spin::up, Spin::down};

void push(FermionOperator& out, double c, std::vector<Ladder> ops) {
  out.terms.push_back({c, std::move(ops)});
}

Ladder create(int q) { return {q, true}; }
Ladder annihilate(int q) { return {q, false}; }

}  // namespace

FermionOperator to_fermion_operator(const TermList& terms, const QubitOrdering& ordering) {
  FermionOperator out;
  out.num_qubits = ordering.num_qubits();
  auto q = [&](int site, int band, Spin s) { return ordering.qubit(site, band, s); };
  for (const auto& t : terms) {
    const double c = t.coefficient;
    switch (t.kind) {
      case TermKind::hop_intra:
      case TermKind::hop_inter_onsite:
      case TermKind::onsite_potential: {
        const auto s = t.spin == SpinPattern::down ? Spin::down : Spin::up;
        const int p = q(t.site_i, t.band_i, s);
        const int r = q(t.site_j, t.band_j, s);
        push(out, c, {create(p), annihilate(r)});
        if (t.includes_conjugate) push(out, c, {create(r), annihilate(p)});
        break;
      }
      case TermKind::u_onsite: {
        const int up = q(t.site_i, t.band_i, Spin::up);
        const int dn = q(t.site_i, t.band_i, Spin::down);
        push(out, c, {create(up), annihilate(up), create(dn), annihilate(dn)});
        break;
      }
      case TermKind::u_inter_onsite:
      case TermKind::v_offsite:
        for (auto s1 : kSpins)
          for (auto s2 : kSpins) {
            const int a = q(t.site_i, t.band_i, s1);
            const int b = q(t.site_j, t.band_j, s2);
            push(out, c, {create(a), annihilate(a), create(b), annihilate(b)});
          }
        break;
    }
  }
  return out;
}

PauliOperator jordan_wigner(const FermionOperator& op) {
  const int n = op.num_qubits;
  std::vector<PauliOperator> lowering;
  std::vector<PauliOperator> raising;
  lowering.reserve(static_cast<std::size_t>(n));
  raising.reserve(static_cast<std::size_t>(n));
  for (int qb = 0; qb < n; ++qb) {
    const std::uint64_t bit = std::uint64_t{1} << qb;
    const std::uint64_t parity = bit - 1;
    const PauliString xs{bit, parity};
    const PauliString ys{bit, parity | bit};
    PauliOperator a(n), ad(n);
    a.add(xs, 0.5);
    a.add(ys, cx(0.0, 0.5));
    ad.add(xs, 0.5);
    ad.add(ys, cx(0.0, -0.5));
    lowering.push_back(std::move(a));
    raising.push_back(std::move(ad));
  }

  PauliOperator out(n);
  for (const auto& term : op.terms) {
    PauliOperator prod = PauliOperator::identity(n, term.coefficient);
    for (const auto& l : term.ops) {
      if (l.qubit < 0 || l.qubit >= n)
        throw std::out_of_range(
            fmt::format("jordan_wigner: qubit {} outside [0, {})", l.qubit, n));
      prod = prod * (l.dagger ? raising : lowering)[static_cast<std::size_t>(l.qubit)];
    }
    out += prod;
  }
  out.prune();
  return out;
}

PauliTermSum jordan_wigner(const TermList& terms, const QubitOrdering& ordering) {
  return to_term_sum(jordan_wigner(to_fermion_operator(terms, ordering)));
}

PauliTermSum qubit_hamiltonian(const ExtendedHubbardModel& model, const QubitOrdering& ordering,
                               OnsitePotentialPolicy policy) {
  if (ordering.num_qubits() != model.num_spin_orbitals())
    throw DimensionError(fmt::format("ordering covers {} qubits, model needs {}",
                                     ordering.num_qubits(), model.num_spin_orbitals()));
  return jordan_wigner(expand_terms(model, policy), ordering);
}

}  // namespace dfvqe
