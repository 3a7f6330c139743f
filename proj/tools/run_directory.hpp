// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "dfvqe/dmrg/dmrg.hpp"
#include "dfvqe/observables/observables.hpp"
#include "dfvqe/vqe/vqe.hpp"

namespace dfvqe::cli {

/// Bundled material name ("ca2cuo3") or a file path.
std::filesystem::path resolve_model_path(const std::string& name_or_path);

/// Output directory of one run: manifest.json on creation, then summary.json
/// and CSV files. A default-constructed directory discards everything.
class RunDirectory {
 public:
  RunDirectory() = default;
  RunDirectory(std::filesystem::path root, const nlohmann::json& manifest);

  bool enabled() const noexcept { return !root_.empty(); }
  const std::filesystem::path& root() const noexcept { return root_; }

  void write_json(const std::string& name, const nlohmann::json& document) const;
  void write_csv(const std::string& name, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) const;

 private:
  std::filesystem::path root_;
};

void write_dmrg_trace(const RunDirectory& dir, const std::string& name, const DmrgResult& result);
void write_vqe_tables(const RunDirectory& dir, const VqeResult& result);
void write_observables(const RunDirectory& dir, const ObservableReport& report);

nlohmann::json to_json(const ObservableReport& report);
nlohmann::json to_json(const VqeResult& result);

/// Human-readable observable summary.
std::string format_observables(const ObservableReport& report);

}  // namespace dfvqe::cli
