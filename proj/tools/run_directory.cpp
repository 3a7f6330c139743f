// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#include "run_directory.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "dfvqe/core/error.hpp"

namespace dfvqe::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double x) { return std::isfinite(x) ? fmt::format("{:.12g}", x) : "nan"; }

nlohmann::json finite_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

}  // namespace

fs::path resolve_model_path(const std::string& name_or_path) {
  const fs::path direct(name_or_path);
  if (fs::is_regular_file(direct)) return direct;
  const fs::path bundled = fs::path(DFVQE_DATA_DIR) / (name_or_path + ".json");
  if (fs::is_regular_file(bundled)) return bundled;
  throw ValidationError(fmt::format("model '{}' is neither a file nor a bundled material",
                                    name_or_path));
}

RunDirectory::RunDirectory(fs::path root, const nlohmann::json& manifest) : root_(std::move(root)) {
  fs::create_directories(root_);
  write_json("manifest.json", manifest);
}

void RunDirectory::write_json(const std::string& name, const nlohmann::json& document) const {
  if (!enabled()) return;
  std::ofstream out(root_ / name);
  out << document.dump(2) << '\n';
  if (!out) throw Error(fmt::format("cannot write {}", (root_ / name).string()));
}

void RunDirectory::write_csv(const std::string& name, const std::vector<std::string>& header,
                             const std::vector<std::vector<std::string>>& rows) const {
  if (!enabled()) return;
  std::ofstream out(root_ / name);
  out << fmt::format("{}\n", fmt::join(header, ","));
  for (const auto& row : rows) out << fmt::format("{}\n", fmt::join(row, ","));
  if (!out) throw Error(fmt::format("cannot write {}", (root_ / name).string()));
}

void write_dmrg_trace(const RunDirectory& dir, const std::string& name, const DmrgResult& result) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& s : result.trace)
    rows.push_back({std::to_string(s.sweep), num(s.energy), std::to_string(s.chi),
                    std::to_string(s.max_bond_dim), num(s.truncation_weight), num(s.noise)});
  dir.write_csv(name, {"sweep", "energy_ev", "chi", "max_bond_dim", "truncation_weight", "noise"},
                rows);
}

void write_vqe_tables(const RunDirectory& dir, const VqeResult& result) {
  std::vector<std::vector<std::string>> restarts, trace;
  for (const auto& r : result.restarts) {
    restarts.push_back({std::to_string(r.restart), std::to_string(r.seed), num(r.energy),
                        num(r.fidelity), std::to_string(r.iterations), to_string(r.termination)});
    auto add = [&](const char* phase, const PhaseOutcome& p) {
      for (std::size_t i = 0; i < p.trace.size(); ++i)
        trace.push_back({std::to_string(r.restart), phase, std::to_string(i), num(p.trace[i])});
    };
    add("energy", r.energy_phase);
    if (r.overlap_phase) add("overlap", *r.overlap_phase);
  }
  dir.write_csv("vqe_restarts.csv",
                {"restart", "seed", "energy_ev", "fidelity", "iterations", "termination"}, restarts);
  dir.write_csv("vqe_trace.csv", {"restart", "phase", "iteration", "objective"}, trace);
}

void write_observables(const RunDirectory& dir, const ObservableReport& report) {
  std::vector<std::vector<std::string>> corr, occ;
  for (std::size_t j = 0; j < report.spin_correlations.size(); ++j)
    corr.push_back({std::to_string(j), num(report.spin_correlations[j]), num(report.spin_z[j]),
                    num(report.charge.site_charge[j])});
  dir.write_csv("spin_correlations.csv", {"site", "c_0j", "sz", "charge"}, corr);
  for (const auto& b : report.bands)
    occ.push_back({std::to_string(b.band), num(b.up), num(b.down), num(b.total()), num(b.reference),
                   num(b.delta_n_el())});
  dir.write_csv("occupations.csv", {"band", "up", "down", "total", "reference", "delta_n_el"}, occ);
}

nlohmann::json to_json(const ObservableReport& report) {
  nlohmann::json bands = nlohmann::json::array();
  for (const auto& b : report.bands)
    bands.push_back({{"band", b.band},
                     {"up", b.up},
                     {"down", b.down},
                     {"reference", b.reference},
                     {"delta_n_el", b.delta_n_el()}});
  return {{"spin_correlations_c0j", report.spin_correlations},
          {"spin_z", report.spin_z},
          {"bands", bands},
          {"excitonic",
           {{"coherence_re", report.excitonic.coherence.real()},
            {"coherence_im", report.excitonic.coherence.imag()},
            {"u_prime", report.excitonic.u_prime},
            {"delta", report.excitonic.delta}}},
          {"charge",
           {{"sublattice_a", report.charge.sublattice_a},
            {"sublattice_b", report.charge.sublattice_b},
            {"phi", report.charge.phi},
            {"site_charge", report.charge.site_charge}}}};
}

nlohmann::json to_json(const VqeResult& result) {
  nlohmann::json restarts = nlohmann::json::array();
  for (const auto& r : result.restarts)
    restarts.push_back({{"restart", r.restart},
                        {"seed", r.seed},
                        {"energy", r.energy},
                        {"fidelity", finite_or_null(r.fidelity)},
                        {"iterations", r.iterations},
                        {"termination", to_string(r.termination)}});
  return {{"backend", result.backend},
          {"num_parameters", result.num_parameters},
          {"two_qubit_gates", result.two_qubit_gates},
          {"initial_energy", result.initial_energy},
          {"reference_energy", finite_or_null(result.reference_energy)},
          {"best_energy", result.best_energy},
          {"best_fidelity", finite_or_null(result.best_fidelity)},
          {"best_restart", result.best_restart},
          {"restarts", restarts}};
}

std::string format_observables(const ObservableReport& report) {
  std::string out = "C_0j (band 0):";
  for (double c : report.spin_correlations) out += fmt::format(" {:+.4f}", c);
  out += "\nband occupations:\n";
  for (const auto& b : report.bands)
    out += fmt::format("  band {}: n = {:.4f} (ref {:.0f}, delta_n_el {:+.4f})\n", b.band, b.total(),
                       b.reference, b.delta_n_el());
  if (report.bands.size() > 1)
    out += fmt::format("excitonic: |<c+c v>| = {:.6f}, U' = {:.4f} eV, Delta = {:.6f} eV\n",
                       std::abs(report.excitonic.coherence), report.excitonic.u_prime,
                       report.excitonic.delta);
  out += fmt::format("charge: A = {:.4f}, B = {:.4f}, Phi = {:.6f}\n", report.charge.sublattice_a,
                     report.charge.sublattice_b, report.charge.phi);
  return out;
}

}  // namespace dfvqe::cli
