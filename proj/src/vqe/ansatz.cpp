// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfvqe/vqe/ansatz.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <fmt/format.h>

#include "dfvqe/core/error.hpp"

namespace dfvqe {

std::string to_string(AnsatzKind kind) { return kind == AnsatzKind::np ? "np" : "ep"; }

AnsatzKind parse_ansatz_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "np") return AnsatzKind::np;
  if (lower == "ep") return AnsatzKind::ep;
  throw ValidationError(fmt::format("unknown ansatz '{}' (expected np or ep)", text));
}

int AnsatzSpec::num_parameters() const noexcept {
  int n = 0;
  for (const auto& g : gates) n += g.num_params();
  return n;
}

int AnsatzSpec::two_qubit_gate_count() const noexcept {
  return static_cast<int>(
      std::count_if(gates.begin(), gates.end(), [](const GateOp& g) { return g.b >= 0; }));
}

AnsatzSpec build_ansatz(const ExtendedHubbardModel& model, const QubitOrdering& ordering,
                        AnsatzKind kind, int layers, bool include_initial_rz) {
  model.validate();
  if (layers < 1) throw ValidationError(fmt::format("ansatz needs >= 1 layer (got {})", layers));
  if (ordering.num_qubits() != model.num_spin_orbitals())
    throw ValidationError("ansatz: ordering does not match the model");
  AnsatzSpec spec;
  spec.kind = kind;
  spec.layers = layers;
  spec.include_initial_rz = include_initial_rz;
  spec.num_qubits = ordering.num_qubits();
  int param = 0;
  auto push = [&](GateTemplate t, int a, int b, bool fermionic) {
    spec.gates.push_back({t, a, b, fermionic, param});
    param += spec.gates.back().num_params();
  };
  if (include_initial_rz)
    for (int q = 0; q < spec.num_qubits; ++q) push(GateTemplate::rz, q, -1, false);

  if (kind == AnsatzKind::np) {
    const auto bonds = model.lattice.bonds();
    std::vector<std::vector<Bond>> colours(4);
    for (const auto& bond : bonds) {
      const bool along_x = bond.direction == Direction::x;
      const int coord = along_x ? model.lattice.x_of(bond.a) : model.lattice.y_of(bond.a);
      colours[static_cast<std::size_t>((along_x ? 0 : 2) + coord % 2)].push_back(bond);
    }
    for (int layer = 0; layer < layers; ++layer) {
      for (int s = 0; s < model.num_sites(); ++s)
        for (int band = 0; band < model.bands; ++band)
          push(GateTemplate::givens, ordering.qubit(s, band, Spin::up),
               ordering.qubit(s, band, Spin::down), true);
      for (const auto& colour : colours)
        for (int band = 0; band < model.bands; ++band)
          for (Spin spin : {Spin::up, Spin::down})
            for (const auto& bond : colour)
              push(GateTemplate::givens, ordering.qubit(bond.a, band, spin),
                   ordering.qubit(bond.b, band, spin), true);
    }
  } else {
    for (int layer = 0; layer < layers; ++layer)
      for (int start : {0, 1})
        for (int q = start; q + 1 < spec.num_qubits; q += 2)
          push(GateTemplate::fsim, q, q + 1, false);
  }
  return spec;
}

Gate4 two_qubit_matrix(GateTemplate kind, double theta, double phi) {
  if (kind == GateTemplate::rz) throw ValidationError("rz is a single-qubit template");
  const double c = std::cos(theta), s = std::sin(theta);
  Gate4 g = Gate4::Zero();
  g(0, 0) = 1.0;
  g(3, 3) = std::polar(1.0, phi);
  if (kind == GateTemplate::givens) {
    g(1, 1) = c;
    g(1, 2) = -s;
    g(2, 1) = s;
    g(2, 2) = c;
  } else {
    g(1, 1) = c;
    g(1, 2) = cx(0.0, -s);
    g(2, 1) = cx(0.0, -s);
    g(2, 2) = c;
  }
  return g;
}

Gate4 two_qubit_derivative(GateTemplate kind, double theta, double phi, int which) {
  if (kind == GateTemplate::rz) throw ValidationError("rz is a single-qubit template");
  Gate4 g = Gate4::Zero();
  if (which == 1) {
    g(3, 3) = cx(0.0, 1.0) * std::polar(1.0, phi);
    return g;
  }
  const double c = std::cos(theta), s = std::sin(theta);
  if (kind == GateTemplate::givens) {
    g(1, 1) = -s;
    g(1, 2) = -c;
    g(2, 1) = c;
    g(2, 2) = -s;
  } else {
    g(1, 1) = -s;
    g(1, 2) = cx(0.0, -c);
    g(2, 1) = cx(0.0, -c);
    g(2, 2) = -s;
  }
  return g;
}

Gate2 rz_matrix(double theta) {
  Gate2 g = Gate2::Zero();
  g(0, 0) = std::polar(1.0, -0.5 * theta);
  g(1, 1) = std::polar(1.0, 0.5 * theta);
  return g;
}

Gate2 rz_derivative(double theta) {
  Gate2 g = Gate2::Zero();
  g(0, 0) = cx(0.0, -0.5) * std::polar(1.0, -0.5 * theta);
  g(1, 1) = cx(0.0, 0.5) * std::polar(1.0, 0.5 * theta);
  return g;
}

}  // namespace dfvqe
