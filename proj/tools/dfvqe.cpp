// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

// dfvqe: inspect, solve and cost downfolded extended-Hubbard models.
//
// Exit codes: 0 success, 1 solver non-convergence (or failed reproduction
// gate), 2 input error.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "dfvqe/core/error.hpp"
#include "dfvqe/dmrg/dmrg.hpp"
#include "dfvqe/ed/ed.hpp"
#include "dfvqe/observables/observables.hpp"
#include "dfvqe/resources/resources.hpp"
#include "dfvqe/vqe/vqe.hpp"
#include "reproduce.hpp"
#include "run_directory.hpp"

namespace fs = std::filesystem;
using namespace dfvqe;
using namespace dfvqe::cli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSolver = 1;
constexpr int kExitInput = 2;

struct SolverFailure : Error {
  using Error::Error;
};

struct Options {
  std::string model;
  std::string out;
  bool no_out = false;
  std::uint64_t seed = 0;
  std::string ansatz = "np";
  int layers = 10;
  int chi = 0;
  int restarts = 10;
  double epsilon = 1e-3;
  double gate_fidelity = 0.999;
  double log_base = 2.0;
  std::optional<std::int64_t> gates;
  std::optional<std::int64_t> params;
  std::optional<int> electrons;
  std::string backend = "auto";
  std::string phase2 = "overlap";
  std::string gradient = "auto";
  int max_iters = 500;
  int lbfgs_memory = 500;
  std::string solver = "auto";
  std::string averaging = "vc";
  bool quick = false;
  bool skip_vqe = false;
  std::string material;
  std::string log_level = "info";
};

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json manifest(const std::string& command, const Options& o, const fs::path& model_path) {
  return {{"command", command},
          {"model_path", model_path.string()},
          {"seed", o.seed},
          {"options",
           {{"ansatz", o.ansatz},
            {"layers", o.layers},
            {"chi", o.chi},
            {"restarts", o.restarts},
            {"epsilon", o.epsilon},
            {"gate_fidelity", o.gate_fidelity},
            {"log_base", o.log_base},
            {"backend", o.backend},
            {"phase2", o.phase2},
            {"gradient", o.gradient},
            {"max_iters", o.max_iters},
            {"lbfgs_memory", o.lbfgs_memory},
            {"solver", o.solver},
            {"averaging", o.averaging},
            {"quick", o.quick},
            {"skip_vqe", o.skip_vqe}}},
          {"created", timestamp()}};
}

// Run directory: --out, else runs/<command>-<model stem> for solver commands.
RunDirectory open_run(const std::string& command, const Options& o, const fs::path& model_path,
                      bool default_on) {
  if (o.no_out) return {};
  fs::path root = o.out;
  if (root.empty()) {
    if (!default_on) return {};
    root = fs::path("runs") / fmt::format("{}-{}", command, model_path.stem().string());
  }
  RunDirectory dir(root, manifest(command, o, model_path));
  spdlog::info("writing run to {}", dir.root().string());
  return dir;
}

DmrgConfig dmrg_config(const Options& o) {
  DmrgConfig c;
  if (o.chi > 0) c.chi_schedule = default_chi_schedule(o.chi);
  c.seed = o.seed;
  return c;
}

int cmd_inspect(const Options& o) {
  const auto path = resolve_model_path(o.model);
  const auto model = load_model(path);
  const bool drop = drops_onsite_potential(model, OnsitePotentialPolicy::automatic);
  const auto counts = count_terms(model.lattice.nx, model.lattice.ny, model.bands, drop);
  const double norm = one_norm(model);
  fmt::print("model      {}\n", model.name);
  fmt::print("lattice    {} x {} (open)\n", model.lattice.nx, model.lattice.ny);
  fmt::print("bands      {}\n", model.bands);
  fmt::print("filling    [{}] ({} electrons)\n", fmt::join(model.filling, ", "),
             model.num_electrons());
  fmt::print("qubits     {}\n", model.num_spin_orbitals());
  fmt::print("terms      {} terms\n", counts.total);
  fmt::print("  intra-band hopping       {}\n", counts.hop_intra);
  fmt::print("  same-site inter-band hop {}\n", counts.hop_inter_onsite);
  fmt::print("  on-site potential        {}{}\n", counts.onsite_potential,
             drop ? " (dropped)" : "");
  fmt::print("  on-site U                {}\n", counts.u_onsite);
  fmt::print("  on-site U'               {}\n", counts.u_inter_onsite);
  fmt::print("  off-site V               {}\n", counts.v_offsite);
  fmt::print("full terms {:.3g} (active space only)\n",
             static_cast<double>(count_full_terms(model.lattice.nx, model.lattice.ny, model.bands)));
  fmt::print("1-norm     {:.6g} (nearest-neighbour terms)\n", norm);
  const auto dir = open_run("inspect", o, path, false);
  dir.write_json("summary.json", {{"model", model.name},
                                  {"n_q", model.num_spin_orbitals()},
                                  {"n_terms", counts.total},
                                  {"one_norm", norm}});
  return kExitOk;
}

int cmd_estimate(const Options& o) {
  const auto path = resolve_model_path(o.model);
  const auto model = load_model(path);
  if (o.gates.has_value() != o.params.has_value())
    throw ValidationError("--gates and --params must be given together");
  ResourceEstimate est;
  if (o.gates) {
    est = resource_report(model, CircuitCounts{*o.gates, *o.params}, o.gate_fidelity, o.epsilon,
                          o.log_base);
  } else {
    const auto ordering = build_ordering(model);
    const auto ansatz = build_ansatz(model, ordering, parse_ansatz_kind(o.ansatz), o.layers);
    est = resource_report(model, ansatz, o.gate_fidelity, o.epsilon, o.log_base);
  }
  fmt::print("{}", format_resource_table({est}));
  const auto dir = open_run("estimate", o, path, false);
  dir.write_json("summary.json", to_json(est));
  return kExitOk;
}

ObservableReport report_and_print(const StateView& psi, const ExtendedHubbardModel& model,
                                  const QubitOrdering& ordering, const Options& o) {
  auto obs = observe(psi, model, ordering, parse_uprime_averaging(o.averaging));
  fmt::print("{}", format_observables(obs));
  return obs;
}

int cmd_ed(const Options& o) {
  const auto path = resolve_model_path(o.model);
  const auto model = load_model(path);
  const auto ordering = build_ordering(model);
  const int n = o.electrons.value_or(model.num_electrons());
  const auto r = ed_ground_state(model, n);
  if (!r.converged) throw SolverFailure("ED did not converge");
  fmt::print("ED ground state: E = {:.10f} eV ({} electrons, sector dimension {})\n", r.energy, n,
             r.basis.dimension());
  const SectorState psi{r.basis, r.amplitudes.cast<cx>()};
  const auto obs = report_and_print(psi, model, ordering, o);
  const auto dir = open_run("ed", o, path, true);
  write_observables(dir, obs);
  dir.write_json("summary.json", {{"energy", r.energy},
                                  {"electrons", n},
                                  {"dimension", r.basis.dimension()},
                                  {"observables", to_json(obs)}});
  return kExitOk;
}

DmrgResult run_dmrg(const ExtendedHubbardModel& model, const QubitOrdering& ordering,
                    const Options& o) {
  const auto r = dmrg_ground_state(model, ordering, dmrg_config(o), OnsitePotentialPolicy::automatic,
                                   [](const SweepRecord& s) {
                                     spdlog::info("sweep {:3d}  E = {:.10f}  chi {:4d}  trunc {:.2e}",
                                                  s.sweep, s.energy, s.max_bond_dim,
                                                  s.truncation_weight);
                                   });
  fmt::print("DMRG ground state: E = {:.10f} eV ({} sweeps, {})\n", r.energy, r.trace.size(),
             r.converged ? "converged" : "NOT converged");
  return r;
}

int cmd_dmrg(const Options& o) {
  const auto path = resolve_model_path(o.model);
  const auto model = load_model(path);
  const auto ordering = build_ordering(model);
  const auto dir = open_run("dmrg", o, path, true);
  const auto r = run_dmrg(model, ordering, o);
  const auto obs = report_and_print(r.state, model, ordering, o);
  write_dmrg_trace(dir, "dmrg_trace.csv", r);
  write_observables(dir, obs);
  dir.write_json("summary.json", {{"energy", r.energy},
                                  {"converged", r.converged},
                                  {"penalty_satisfied", r.penalty_satisfied},
                                  {"observables", to_json(obs)}});
  return r.converged && r.penalty_satisfied ? kExitOk : kExitSolver;
}

int cmd_vqe(const Options& o) {
  const auto path = resolve_model_path(o.model);
  const auto model = load_model(path);
  const auto ordering = build_ordering(model);
  const auto ansatz = build_ansatz(model, ordering, parse_ansatz_kind(o.ansatz), o.layers);
  OptimizerConfig config;
  config.restarts = o.restarts;
  config.seed = o.seed;
  config.max_iters = o.max_iters;
  config.lbfgs_memory = o.lbfgs_memory;
  config.phase2 = parse_phase2(o.phase2);
  config.gradient = parse_gradient_method(o.gradient);
  VqeSetup setup;
  setup.backend = parse_backend_kind(o.backend);
  setup.chi = o.chi;
  if (o.chi > 0) setup.dmrg.chi_schedule = default_chi_schedule(o.chi);
  setup.dmrg.seed = o.seed;
  const auto dir = open_run("vqe", o, path, true);
  const auto run = run_vqe(model, ordering, ansatz, config, setup, [](const RestartRecord& r) {
    fmt::print("restart {:2d}: E = {:.8f} eV, F = {:.6f}, {} iterations ({})\n", r.restart,
               r.energy, r.fidelity, r.iterations, to_string(r.termination));
  });
  const auto& res = run.result;
  fmt::print("best restart {}: E = {:.8f} eV, F = {:.6f}; DMRG {:.8f} eV (gap {:+.4f} eV)\n",
             res.best_restart, res.best_energy, res.best_fidelity, res.reference_energy,
             res.best_energy - res.reference_energy);
  const auto state = run.backend->state(res.best_parameters);
  const auto obs = std::visit(
      [&](const auto& s) { return report_and_print(s, model, ordering, o); }, state);
  write_vqe_tables(dir, res);
  write_observables(dir, obs);
  auto summary = to_json(res);
  summary["observables"] = to_json(obs);
  dir.write_json("summary.json", summary);
  bool any_ok = false;
  for (const auto& r : res.restarts) any_ok = any_ok || r.termination != Termination::numerical_failure;
  const bool reference_ok = !run.reference || run.reference->converged;
  return any_ok && reference_ok ? kExitOk : kExitSolver;
}

int cmd_observables(const Options& o) {
  const auto path = resolve_model_path(o.model);
  const auto model = load_model(path);
  const auto ordering = build_ordering(model);
  std::string solver = o.solver;
  if (solver == "auto") solver = model.num_spin_orbitals() <= kEdMaxQubits ? "ed" : "dmrg";
  const auto dir = open_run("observables", o, path, true);
  ObservableReport obs;
  double energy = 0.0;
  bool ok = true;
  if (solver == "ed") {
    const auto r = ed_ground_state(model, o.electrons.value_or(model.num_electrons()));
    energy = r.energy;
    ok = r.converged;
    fmt::print("ED: E = {:.10f} eV\n", r.energy);
    obs = report_and_print(SectorState{r.basis, r.amplitudes.cast<cx>()}, model, ordering, o);
  } else if (solver == "dmrg") {
    const auto r = run_dmrg(model, ordering, o);
    energy = r.energy;
    ok = r.converged && r.penalty_satisfied;
    obs = report_and_print(r.state, model, ordering, o);
  } else {
    throw ValidationError(fmt::format("unknown solver '{}' (ed, dmrg, auto)", solver));
  }
  write_observables(dir, obs);
  dir.write_json("summary.json",
                 {{"solver", solver}, {"energy", energy}, {"observables", to_json(obs)}});
  return ok ? kExitOk : kExitSolver;
}

int cmd_reproduce(const Options& o) {
  ReproduceOptions r;
  r.quick = o.quick;
  r.skip_vqe = o.skip_vqe;
  r.restarts = o.restarts;
  r.seed = o.seed;
  r.dmrg_chi = o.chi;
  r.vqe_chi = o.chi;
  r.epsilon = o.epsilon;
  r.gate_fidelity = o.gate_fidelity;
  const auto path = resolve_model_path(o.material);
  const auto dir = open_run("reproduce", o, path, true);
  const auto report = reproduce(o.material, r, dir);
  fmt::print("{}", format_checks(report.checks));
  const auto& ref = reference_row(o.material);
  if (ref.alternate_gates)
    fmt::print("note: {} is quoted with {} and {} two-qubit gates; the fidelity gate uses {}.\n",
               o.material, ref.two_qubit_gates, *ref.alternate_gates, ref.two_qubit_gates);
  auto summary = report.summary;
  summary["checks"] = to_json(report.checks);
  summary["gated_pass"] = report.gated_pass();
  dir.write_json("summary.json", summary);
  fmt::print("{}\n", report.gated_pass() ? "all gated checks passed" : "gated checks FAILED");
  return report.gated_pass() ? kExitOk : kExitSolver;
}

void add_model(CLI::App* cmd, Options& o) {
  cmd->add_option("--model", o.model, "Model file or bundled material (ca2cuo3, wte2, srvo3)")
      ->required();
}

void add_output(CLI::App* cmd, Options& o) {
  cmd->add_option("--out", o.out, "Run directory");
  cmd->add_flag("--no-out", o.no_out, "Do not write a run directory");
  cmd->add_option("--seed", o.seed, "Random seed (recorded in the manifest)");
}

void add_circuit(CLI::App* cmd, Options& o) {
  cmd->add_option("--ansatz", o.ansatz, "np or ep")->check(CLI::IsMember({"np", "ep"}));
  cmd->add_option("--layers", o.layers, "Ansatz layers")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dfvqe: downfolded extended-Hubbard models: inspection, ED, DMRG, VQE, resources"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--log-level", o.log_level, "trace, debug, info, warn, error, off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  auto* inspect = app.add_subcommand("inspect", "Summarise a model: lattice, term counts, 1-norm");
  add_model(inspect, o);
  add_output(inspect, o);

  auto* estimate = app.add_subcommand("estimate", "Near-term and fault-tolerant resource estimate");
  add_model(estimate, o);
  add_output(estimate, o);
  add_circuit(estimate, o);
  estimate->add_option("--gates", o.gates, "Two-qubit gate count (overrides the ansatz)");
  estimate->add_option("--params", o.params, "Parameter count (with --gates)");
  estimate->add_option("--epsilon", o.epsilon, "Rotation synthesis accuracy");
  estimate->add_option("--gate-fidelity", o.gate_fidelity, "Two-qubit gate fidelity");
  estimate->add_option("--log-base", o.log_base, "Base of the synthesis-cost logarithm");

  auto* ed = app.add_subcommand("ed", "Exact diagonalisation (up to 16 qubits)");
  add_model(ed, o);
  add_output(ed, o);
  ed->add_option("--electrons", o.electrons, "Electron number (default: model filling)");
  ed->add_option("--averaging", o.averaging, "U' averaging: vc or all");

  auto* dmrg = app.add_subcommand("dmrg", "Two-site DMRG ground state");
  add_model(dmrg, o);
  add_output(dmrg, o);
  dmrg->add_option("--chi", o.chi, "Bond dimension cap (default 512)");
  dmrg->add_option("--averaging", o.averaging, "U' averaging: vc or all");

  auto* vqe = app.add_subcommand("vqe", "Simulated VQE from the noninteracting state");
  add_model(vqe, o);
  add_output(vqe, o);
  add_circuit(vqe, o);
  vqe->add_option("--chi", o.chi, "MPS / DMRG bond cap");
  vqe->add_option("--restarts", o.restarts, "Random restarts")->check(CLI::PositiveNumber);
  vqe->add_option("--backend", o.backend, "auto, sector or mps");
  vqe->add_option("--phase2", o.phase2, "overlap or none");
  vqe->add_option("--gradient", o.gradient, "auto, adjoint or fd");
  vqe->add_option("--max-iters", o.max_iters, "Iterations per phase");
  vqe->add_option("--lbfgs-memory", o.lbfgs_memory, "L-BFGS correction pairs")
      ->check(CLI::PositiveNumber);
  vqe->add_option("--averaging", o.averaging, "U' averaging: vc or all");

  auto* observables = app.add_subcommand("observables", "Ground-state observables");
  add_model(observables, o);
  add_output(observables, o);
  observables->add_option("--solver", o.solver, "auto, ed or dmrg");
  observables->add_option("--chi", o.chi, "DMRG bond cap");
  observables->add_option("--electrons", o.electrons, "Electron number for ED");
  observables->add_option("--averaging", o.averaging, "U' averaging: vc or all");

  auto* repro = app.add_subcommand("reproduce", "Full pipeline with a published-value comparison");
  repro->add_option("material", o.material, "ca2cuo3, wte2 or srvo3")
      ->required()
      ->check(CLI::IsMember({"ca2cuo3", "wte2", "srvo3"}));
  add_output(repro, o);
  repro->add_flag("--quick", o.quick, "Resources only");
  repro->add_flag("--skip-vqe", o.skip_vqe, "Stop after DMRG and observables");
  repro->add_option("--restarts", o.restarts, "VQE restarts")->check(CLI::PositiveNumber);
  repro->add_option("--chi", o.chi, "DMRG and MPS bond cap");
  repro->add_option("--epsilon", o.epsilon, "Rotation synthesis accuracy");
  repro->add_option("--gate-fidelity", o.gate_fidelity, "Two-qubit gate fidelity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }
  spdlog::set_level(spdlog::level::from_str(o.log_level));
  spdlog::set_pattern("[%H:%M:%S] %v");

  try {
    if (*inspect) return cmd_inspect(o);
    if (*estimate) return cmd_estimate(o);
    if (*ed) return cmd_ed(o);
    if (*dmrg) return cmd_dmrg(o);
    if (*vqe) return cmd_vqe(o);
    if (*observables) return cmd_observables(o);
    if (*repro) return cmd_reproduce(o);
  } catch (const SolverFailure& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitSolver;
  } catch (const NumericalError& e) {
    fmt::print(stderr, "numerical error: {}\n", e.what());
    return kExitSolver;
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitInput;
  }
  return kExitInput;
}
