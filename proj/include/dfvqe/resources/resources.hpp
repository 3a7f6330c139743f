// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dfvqe/model/model.hpp"
#include "dfvqe/model/terms.hpp"
#include "dfvqe/vqe/ansatz.hpp"

namespace dfvqe {

struct ResourceEstimate {
  std::string material;
  int n_q = 0;
  std::int64_t n_two_qubit_gates = 0;  // ansatz gates only, no routing swaps
  std::int64_t n_params = 0;
  double gate_fidelity = 0.999;
  double circuit_fidelity = 1.0;
  double one_norm = 0.0;  // nearest-neighbour terms only
  std::int64_t n_terms = 0;
  std::int64_t t_gate_count = 0;  // order-of-magnitude estimate
  double epsilon = 1e-3;
  double log_base = 2.0;
};

/// g^n_gates. Throws ValidationError for g outside (0, 1] or n_gates < 0.
double circuit_fidelity(std::int64_t n_gates, double gate_fidelity);

/// ceil(n_q 1.15 log2(1/eps)) + (n_params / 2) ceil(16 log_b(1/eps) + 32).
/// `log_base` applies to the rotation-synthesis logarithm only. Throws
/// ValidationError for eps outside (0, 1), odd or negative n_params, or a
/// base <= 1.
std::int64_t t_gate_count(std::int64_t n_q, std::int64_t n_params, double epsilon,
                          double log_base = 2.0);

/// Gate and parameter counts supplied directly instead of from an ansatz.
struct CircuitCounts {
  std::int64_t two_qubit_gates = 0;
  std::int64_t params = 0;
};

CircuitCounts circuit_counts(const AnsatzSpec& ansatz);

ResourceEstimate resource_report(const ExtendedHubbardModel& model, const CircuitCounts& counts,
                                 double gate_fidelity, double epsilon, double log_base = 2.0,
                                 OnsitePotentialPolicy policy = OnsitePotentialPolicy::automatic);

ResourceEstimate resource_report(const ExtendedHubbardModel& model, const AnsatzSpec& ansatz,
                                 double gate_fidelity, double epsilon, double log_base = 2.0,
                                 OnsitePotentialPolicy policy = OnsitePotentialPolicy::automatic);

/// Published benchmark row for a bundled material.
struct ReferenceRow {
  std::string material;  // bundled file stem
  int n_q = 0;
  std::int64_t two_qubit_gates = 0;
  std::optional<std::int64_t> alternate_gates;  // second count quoted for the same circuit
  std::int64_t params = 0;                      // 2 x gates
  double circuit_fidelity = 0.0;
  double one_norm = 0.0;  // all-neighbour value; an upper bound for ours
  std::int64_t n_terms = 0;
  std::int64_t full_terms = 0;  // 3 significant figures
  int layers = 0;
  AnsatzKind ansatz = AnsatzKind::np;
};

const std::vector<ReferenceRow>& reference_rows();
/// Throws ValidationError for an unknown material.
const ReferenceRow& reference_row(std::string_view material);

nlohmann::json to_json(const ResourceEstimate& estimate);

/// Aligned text table, one row per estimate.
std::string format_resource_table(const std::vector<ResourceEstimate>& rows);

}  // namespace dfvqe
