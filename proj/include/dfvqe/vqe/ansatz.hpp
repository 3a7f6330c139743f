// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dfvqe/encode/ordering.hpp"
#include "dfvqe/encode/pauli.hpp"
#include "dfvqe/model/model.hpp"

namespace dfvqe {

enum class AnsatzKind { np, ep };

std::string to_string(AnsatzKind kind);
/// Accepts "np" / "ep" (case-insensitive).
AnsatzKind parse_ansatz_kind(std::string_view text);

enum class GateTemplate {
  rz,      // diag(e^{-i theta/2}, e^{i theta/2})
  givens,  // real rotation on {|01>, |10>} plus e^{i phi} on |11>
  fsim,    // [[cos, -i sin], [-i sin, cos]] on {|01>, |10>} plus e^{i phi} on |11>
};

/// One gate of the placement plan. Two-qubit gates act in the basis
/// |q_a q_b> with q_a the high bit. `fermionic` gates pick up the
/// Jordan-Wigner parity of the qubits strictly between a and b on their
/// hopping amplitudes.
struct GateOp {
  GateTemplate kind = GateTemplate::rz;
  int a = 0;
  int b = -1;
  bool fermionic = false;
  int param = 0;  // index of the first parameter

  int num_params() const noexcept { return kind == GateTemplate::rz ? 1 : 2; }
};

struct AnsatzSpec {
  AnsatzKind kind = AnsatzKind::np;
  int layers = 1;
  bool include_initial_rz = true;
  int num_qubits = 0;
  std::vector<GateOp> gates;

  int num_parameters() const noexcept;
  int two_qubit_gate_count() const noexcept;
};

/// NP: per layer, one gate per (site, band) on the up/down pair, then one
/// gate per lattice bond, band and spin in four bond colours (x even/odd,
/// y even/odd). EP: per layer, bricks on adjacent qubits (even pairs, then
/// odd pairs). Both start with one R_z per qubit when `include_initial_rz`.
AnsatzSpec build_ansatz(const ExtendedHubbardModel& model, const QubitOrdering& ordering,
                        AnsatzKind kind, int layers, bool include_initial_rz = true);

using Gate4 = Eigen::Matrix4cd;
using Gate2 = Eigen::Matrix2cd;

/// Two-qubit template at (theta, phi).
Gate4 two_qubit_matrix(GateTemplate kind, double theta, double phi);
/// d/dtheta (which = 0) or d/dphi (which = 1) of `two_qubit_matrix`.
Gate4 two_qubit_derivative(GateTemplate kind, double theta, double phi, int which);
Gate2 rz_matrix(double theta);
Gate2 rz_derivative(double theta);

}  // namespace dfvqe
