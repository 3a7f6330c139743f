// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfvqe/resources/resources.hpp"

#include <cmath>

#include <fmt/format.h>

#include "dfvqe/core/error.hpp"

namespace dfvqe {

double circuit_fidelity(std::int64_t n_gates, double gate_fidelity) {
  if (!(gate_fidelity > 0.0 && gate_fidelity <= 1.0))
    throw ValidationError(fmt::format("gate fidelity {} outside (0, 1]", gate_fidelity));
  if (n_gates < 0) throw ValidationError("negative gate count");
  return std::pow(gate_fidelity, static_cast<double>(n_gates));
}

std::int64_t t_gate_count(std::int64_t n_q, std::int64_t n_params, double epsilon,
                          double log_base) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ValidationError(fmt::format("synthesis accuracy {} outside (0, 1)", epsilon));
  if (n_q < 0) throw ValidationError("negative qubit count");
  if (n_params < 0 || n_params % 2 != 0)
    throw ValidationError(fmt::format("parameter count {} must be even and non-negative", n_params));
  if (!(log_base > 1.0)) throw ValidationError("logarithm base must exceed 1");
  const double l2 = std::log2(1.0 / epsilon);
  const double lb = std::log(1.0 / epsilon) / std::log(log_base);
  const auto rz = static_cast<std::int64_t>(std::ceil(static_cast<double>(n_q) * 1.15 * l2));
  const auto per_gate = static_cast<std::int64_t>(std::ceil(16.0 * lb + 32.0));
  return rz + (n_params / 2) * per_gate;
}

CircuitCounts circuit_counts(const AnsatzSpec& ansatz) {
  return {ansatz.two_qubit_gate_count(), ansatz.num_parameters()};
}

ResourceEstimate resource_report(const ExtendedHubbardModel& model, const CircuitCounts& counts,
                                 double gate_fidelity, double epsilon, double log_base,
                                 OnsitePotentialPolicy policy) {
  model.validate();
  ResourceEstimate r;
  r.material = model.name;
  r.n_q = model.num_spin_orbitals();
  r.n_two_qubit_gates = counts.two_qubit_gates;
  r.n_params = counts.params;
  r.gate_fidelity = gate_fidelity;
  r.circuit_fidelity = circuit_fidelity(counts.two_qubit_gates, gate_fidelity);
  r.one_norm = one_norm(model);
  r.n_terms = count_terms(model.lattice.nx, model.lattice.ny, model.bands,
                          drops_onsite_potential(model, policy))
                  .total;
  r.epsilon = epsilon;
  r.log_base = log_base;
  // the T-count pairs parameters two per gate, so odd counts round up
  r.t_gate_count = t_gate_count(r.n_q, counts.params + counts.params % 2, epsilon, log_base);
  return r;
}

ResourceEstimate resource_report(const ExtendedHubbardModel& model, const AnsatzSpec& ansatz,
                                 double gate_fidelity, double epsilon, double log_base,
                                 OnsitePotentialPolicy policy) {
  if (ansatz.num_qubits != model.num_spin_orbitals())
    throw DimensionError("resource_report: ansatz and model disagree on the qubit count");
  return resource_report(model, circuit_counts(ansatz), gate_fidelity, epsilon, log_base, policy);
}

const std::vector<ReferenceRow>& reference_rows() {
  static const std::vector<ReferenceRow> rows = {
      {"ca2cuo3", 20, 290, std::nullopt, 580, 0.748, 2.67e2, 37, 40'200, 10, AnsatzKind::np},
      {"wte2", 32, 652, std::nullopt, 1304, 0.521, 3.31e2, 288, 263'000, 20, AnsatzKind::ep},
      {"srvo3", 54, 584, 484, 1168, 0.558, 2.315e3, 423, 2'130'000, 10, AnsatzKind::ep},
  };
  return rows;
}

const ReferenceRow& reference_row(std::string_view material) {
  for (const auto& row : reference_rows())
    if (row.material == material) return row;
  throw ValidationError(fmt::format("no reference row for '{}'", material));
}

nlohmann::json to_json(const ResourceEstimate& e) {
  return {{"material", e.material},
          {"n_q", e.n_q},
          {"n_two_qubit_gates", e.n_two_qubit_gates},
          {"n_params", e.n_params},
          {"gate_fidelity", e.gate_fidelity},
          {"circuit_fidelity", e.circuit_fidelity},
          {"one_norm", e.one_norm},
          {"n_terms", e.n_terms},
          {"t_gate_count", e.t_gate_count},
          {"t_gate_count_kind", "order-of-magnitude"},
          {"epsilon", e.epsilon},
          {"log_base", e.log_base}};
}

std::string format_resource_table(const std::vector<ResourceEstimate>& rows) {
  std::string out = fmt::format("{:<10} {:>5} {:>8} {:>8} {:>9} {:>10} {:>8} {:>12}\n", "material",
                                "n_q", "n_2q", "n_param", "fidelity", "1-norm", "n_terms",
                                "T-count*");
  for (const auto& r : rows)
    out += fmt::format("{:<10} {:>5} {:>8} {:>8} {:>8.1f}% {:>10.4g} {:>8} {:>12}\n", r.material,
                       r.n_q, r.n_two_qubit_gates, r.n_params, 100.0 * r.circuit_fidelity,
                       r.one_norm, r.n_terms, r.t_gate_count);
  if (!rows.empty())
    out += fmt::format("* order-of-magnitude, eps = {:g}, synthesis log base {:g}\n",
                       rows.front().epsilon, rows.front().log_base);
  return out;
}

}  // namespace dfvqe
