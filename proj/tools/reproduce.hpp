// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "run_directory.hpp"

namespace dfvqe::cli {

/// One row of the computed-versus-published comparison.
struct Check {
  std::string quantity;
  std::string computed;
  std::string reference;
  std::string tolerance;
  bool gated = true;
  bool pass = false;
};

struct ReproduceOptions {
  bool quick = false;     // resources only
  bool skip_vqe = false;  // resources, DMRG and observables
  int restarts = 10;
  std::uint64_t seed = 0;
  int dmrg_chi = 0;  // 0: 256 for Ca2CuO3, 512 otherwise
  int vqe_chi = 0;   // 0: default_vqe_chi
  double epsilon = 1e-3;
  double gate_fidelity = 0.999;
};

struct ReproduceReport {
  std::string material;
  std::vector<Check> checks;
  nlohmann::json summary;
  bool solver_failed = false;

  bool gated_pass() const;
};

/// Material pipeline for "ca2cuo3", "wte2" or "srvo3".
ReproduceReport reproduce(const std::string& material, const ReproduceOptions& options,
                          const RunDirectory& dir);

std::string format_checks(const std::vector<Check>& checks);
nlohmann::json to_json(const std::vector<Check>& checks);

}  // namespace dfvqe::cli
