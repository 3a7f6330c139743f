// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "dfvqe/encode/ordering.hpp"
#include "dfvqe/encode/pauli.hpp"
#include "dfvqe/model/terms.hpp"

namespace dfvqe {

/// Creation (`dagger`) or annihilation operator on a spin-orbital qubit.
struct Ladder {
  int qubit = 0;
  bool dagger = false;
};

/// coefficient * ops[0] ops[1] ... (leftmost operator acts last).
struct FermionTerm {
  cx coefficient = 1.0;
  std::vector<Ladder> ops;
};

struct FermionOperator {
  int num_qubits = 0;
  std::vector<FermionTerm> terms;
};

/// Second-quantised form of a term list under `ordering`.
FermionOperator to_fermion_operator(const TermList& terms, const QubitOrdering& ordering);

/// a_q = Z_0 ... Z_{q-1} (X_q + i Y_q) / 2 with |1> = occupied.
PauliOperator jordan_wigner(const FermionOperator& op);

/// Hermitian qubit Hamiltonian of a term list. Throws NumericalError if the
/// mapped operator has a non-real coefficient.
PauliTermSum jordan_wigner(const TermList& terms, const QubitOrdering& ordering);

/// Convenience: expand, order and map a model in one call.
PauliTermSum qubit_hamiltonian(const ExtendedHubbardModel& model, const QubitOrdering& ordering,
                               OnsitePotentialPolicy policy = OnsitePotentialPolicy::automatic);

}  // namespace dfvqe
