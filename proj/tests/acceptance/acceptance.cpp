// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance checks, one PASS/FAIL line per criterion.
// Exit status is 0 only if every selected criterion passes.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "dfvqe/core/error.hpp"
#include "dfvqe/dmrg/dmrg.hpp"
#include "dfvqe/ed/ed.hpp"
#include "dfvqe/encode/jordan_wigner.hpp"
#include "dfvqe/observables/observables.hpp"
#include "dfvqe/resources/resources.hpp"
#include "dfvqe/vqe/vqe.hpp"

namespace dfvqe {
namespace {

ExtendedHubbardModel material(const std::string& name) {
  return load_model(std::string(DFVQE_DATA_DIR) + "/" + name + ".json");
}

// Random model with every coupling class populated (same recipe as the unit tests).
ExtendedHubbardModel random_model(std::mt19937_64& rng, int nx, int ny, int bands) {
  std::uniform_real_distribution<double> hop(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.0, 2.0);
  ExtendedHubbardModel m;
  m.name = "random";
  m.lattice = {nx, ny};
  m.bands = bands;
  m.t_intra = Eigen::MatrixXd::Zero(bands, bands);
  m.t_onsite = Eigen::MatrixXd::Zero(bands, bands);
  m.u_onsite = Eigen::MatrixXd::Zero(bands, bands);
  m.v_offsite = Eigen::MatrixXd::Zero(bands, bands);
  for (int i = 0; i < bands; ++i) {
    m.t_intra(i, i) = hop(rng);
    m.u_onsite(i, i) = pos(rng);
    for (int j = 0; j < bands; ++j) {
      m.v_offsite(i, j) = 0.5 * pos(rng);
      if (j > i) {
        m.u_onsite(i, j) = m.u_onsite(j, i) = 0.5 * pos(rng);
        m.t_onsite(i, j) = m.t_onsite(j, i) = 0.3 * hop(rng);
      }
    }
    m.t_onsite(i, i) = 0.5 * hop(rng);
  }
  m.filling.assign(static_cast<std::size_t>(bands), 0);
  m.filling[0] = nx * ny;
  m.direction_scale = {1.0, ny > 1 ? 0.7 : 1.0};
  return m;
}

// Relative deviation; absolute when the reference energy is exactly zero.
double relative(double a, double b) { return std::abs(a - b) / (b != 0.0 ? std::abs(b) : 1.0); }

DmrgConfig exact_dmrg_config() {
  DmrgConfig c;
  c.chi_schedule = {64};
  c.energy_convergence = 1e-12;
  c.lanczos.tolerance = 1e-13;
  return c;
}

Eigen::VectorXcd embed(const FockBasis& basis, const Eigen::VectorXcd& v) {
  Eigen::VectorXcd dense = Eigen::VectorXcd::Zero(Eigen::Index{1} << basis.num_qubits());
  for (Eigen::Index i = 0; i < v.size(); ++i) dense(static_cast<Eigen::Index>(basis.state(i))) = v(i);
  return dense;
}

Eigen::VectorXd random_theta(int n, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> d(0.0, scale);
  Eigen::VectorXd t(n);
  for (int i = 0; i < n; ++i) t(i) = d(rng);
  return t;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Settings {
  int ca_restarts = 10;
  int wte2_chi = 128;
  int srvo3_chi = 128;
  std::uint64_t seed = 0;
};

// Results shared between criteria.
struct Context {
  Settings settings;
  std::optional<DmrgResult> ca_dmrg;
  std::optional<VqeRun> ca_vqe;

  const DmrgResult& ca_ground_state() {
    if (!ca_dmrg) {
      const auto model = material("ca2cuo3");
      DmrgConfig c;
      c.chi_schedule = default_chi_schedule(256);
      ca_dmrg = dmrg_ground_state(model, build_ordering(model), c);
    }
    return *ca_dmrg;
  }

  const VqeRun& ca_vqe_run() {
    if (!ca_vqe) {
      const auto model = material("ca2cuo3");
      const auto ordering = build_ordering(model);
      OptimizerConfig config;
      config.restarts = settings.ca_restarts;
      config.seed = settings.seed;
      VqeSetup setup;
      setup.dmrg.chi_schedule = default_chi_schedule(256);
      setup.reference = &ca_ground_state();
      ca_vqe = run_vqe(model, ordering, build_ansatz(model, ordering, AnsatzKind::np, 10), config,
                       setup, [](const RestartRecord& r) {
                         spdlog::info("Ca2CuO3 restart {}: E = {:.6f}, F = {:.5f}, {} iterations",
                                      r.restart, r.energy, r.fidelity, r.iterations);
                       });
    }
    return *ca_vqe;
  }
};

// 1: term counts, structural and full-Hamiltonian.
Outcome term_counts(Context&) {
  struct Row {
    const char* name;
    std::int64_t terms;
    double full;
  };
  bool ok = true;
  std::string detail;
  for (const Row& r : {Row{"ca2cuo3", 37, 4.02e4}, Row{"wte2", 288, 2.63e5}, Row{"srvo3", 423, 2.13e6}}) {
    const auto m = material(r.name);
    const auto n = count_terms(m.lattice.nx, m.lattice.ny, m.bands,
                               drops_onsite_potential(m, OnsitePotentialPolicy::automatic))
                       .total;
    const auto full = count_full_terms(m.lattice.nx, m.lattice.ny, m.bands);
    const bool sig3 = fmt::format("{:.2e}", static_cast<double>(full)) == fmt::format("{:.2e}", r.full);
    ok = ok && n == r.terms && sig3 && static_cast<std::int64_t>(expand_terms(m).size()) == n;
    detail += fmt::format("{} {} / {:.2e}; ", r.name, n, static_cast<double>(full));
  }
  return {ok, detail};
}

// 2: 0.999^n within 0.1 percentage points.
Outcome fidelities(Context&) {
  bool ok = true;
  std::string detail;
  for (auto [n, f] : {std::pair{290, 0.748}, std::pair{652, 0.521}, std::pair{584, 0.558}}) {
    const double c = circuit_fidelity(n, 0.999);
    ok = ok && std::abs(c - f) <= 1e-3;
    detail += fmt::format("{}: {:.2f}% ", n, 100.0 * c);
  }
  return {ok, detail};
}

// 3: Jordan-Wigner dense Hamiltonian equals the fermionic one.
Outcome encoding(Context& ctx) {
  std::mt19937_64 rng(ctx.settings.seed + 2024);
  const int shapes[][3] = {{2, 1, 1}, {3, 1, 1}, {4, 1, 1}, {5, 1, 1}, {2, 2, 1}, {1, 1, 2},
                           {2, 1, 2}, {1, 1, 3}, {1, 2, 2}, {1, 1, 4}, {1, 1, 5}, {3, 1, 1}};
  double worst = 0.0;
  int models = 0;
  for (const auto& sh : shapes)
    for (auto scheme : {SpinScheme::spin_interleaved, SpinScheme::spin_blocked}) {
      const auto m = random_model(rng, sh[0], sh[1], sh[2]);
      if (m.num_spin_orbitals() > 10) continue;
      const auto ordering = build_ordering(m, scheme);
      const auto terms = expand_terms(m, OnsitePotentialPolicy::keep);
      const Eigen::MatrixXcd pauli = dense_matrix(jordan_wigner(terms, ordering));
      const Eigen::MatrixXd fermi = full_hamiltonian(terms, ordering);
      worst = std::max(worst, (pauli - fermi.cast<cx>()).cwiseAbs().maxCoeff());
      ++models;
    }
  return {models >= 20 && worst <= 1e-12,
          fmt::format("{} models, max |H_JW - H_ED| = {:.2e}", models, worst)};
}

// 4: ED and DMRG on material sub-lattices up to 12 qubits.
Outcome cross_validation(Context&) {
  std::vector<ExtendedHubbardModel> models;
  const auto ca = material("ca2cuo3");
  for (int length = 2; length <= 6; ++length) models.push_back(with_lattice(ca, length, 1));
  models.push_back(with_lattice(material("wte2"), 1, 1));
  const auto srvo3 = material("srvo3");
  models.push_back(with_lattice(srvo3, 1, 1));
  models.push_back(with_lattice(srvo3, 2, 1));
  double worst = 0.0;
  std::string where;
  for (const auto& m : models) {
    const double ed = ed_ground_state(m, m.num_electrons()).energy;
    const double dmrg = dmrg_ground_state(m, build_ordering(m), exact_dmrg_config()).energy;
    const double rel = relative(dmrg, ed);
    if (rel >= worst) {
      worst = rel;
      where = fmt::format("{} {}x{}", m.name, m.lattice.nx, m.lattice.ny);
    }
  }
  return {worst <= 1e-8, fmt::format("{} sub-lattices, worst relative gap {:.2e} ({})",
                                     models.size(), worst, where)};
}

// 5: Ca2CuO3 10-site DMRG energy.
Outcome ca_dmrg(Context& ctx) {
  const auto& r = ctx.ca_ground_state();
  return {r.converged && std::abs(r.energy - 6.005) <= 1e-3,
          fmt::format("E = {:.6f} eV (target 6.005 +/- 0.001), {} sweeps", r.energy, r.trace.size())};
}

// 6: Ca2CuO3 NP x10 VQE; fallback gate when the fidelity target is missed.
Outcome ca_vqe(Context& ctx) {
  const auto& run = ctx.ca_vqe_run();
  const double gap = std::abs(run.result.best_energy - ctx.ca_ground_state().energy);
  const double f = run.result.best_fidelity;
  const bool primary = gap <= 0.030 && f >= 0.99;
  const bool fallback = gap <= 0.050 && f >= 0.95;
  return {primary || fallback,
          fmt::format("{} restarts, |E_VQE - E_DMRG| = {:.1f} meV, F = {:.4f} ({})",
                      run.result.restarts.size(), 1e3 * gap, f,
                      primary ? "primary gate" : fallback ? "fallback gate 50 meV / 0.95"
                                                          : "both gates missed")};
}

// 7: alternating C_1j on the DMRG and best VQE states.
Outcome ca_afm(Context& ctx) {
  const auto model = material("ca2cuo3");
  const auto ordering = build_ordering(model);
  const auto dmrg_row = spin_correlation_row(ctx.ca_ground_state().state, ordering, 0);
  const auto& run = ctx.ca_vqe_run();
  const auto state = run.backend->state(run.result.best_parameters);
  const auto vqe_row = std::visit(
      [&](const auto& s) { return spin_correlation_row(s, ordering, 0); }, state);
  const bool a = signs_alternate(dmrg_row), b = signs_alternate(vqe_row);
  std::string signs;
  for (std::size_t j = 1; j < vqe_row.size(); ++j) signs += vqe_row[j] < 0 ? '-' : '+';
  return {a && b, fmt::format("DMRG {}, VQE {} (VQE signs j=2..10: {})", a ? "alternates" : "does not",
                              b ? "alternates" : "does not", signs)};
}

// 8: WTe2 2x2 DMRG energy, excitonic order and band-occupation signs.
Outcome wte2(Context& ctx) {
  const auto model = material("wte2");
  const auto ordering = build_ordering(model);
  DmrgConfig c;
  c.chi_schedule = default_chi_schedule(ctx.settings.wte2_chi);
  const auto r = dmrg_ground_state(model, ordering, c, OnsitePotentialPolicy::automatic,
                                   [](const SweepRecord& s) {
                                     spdlog::info("WTe2 sweep {}: E = {:.6f}, chi {}", s.sweep,
                                                  s.energy, s.max_bond_dim);
                                   });
  const auto obs = observe(r.state, model, ordering);
  const auto split = default_band_split(model);
  bool signs = true;
  for (int v : split.valence) signs = signs && obs.bands[static_cast<std::size_t>(v)].delta_n_el() > 0;
  for (int cb : split.conduction)
    signs = signs && obs.bands[static_cast<std::size_t>(cb)].delta_n_el() < 0;
  const bool energy = std::abs(r.energy - 115.029) <= 5e-3;
  const bool delta = std::abs(obs.excitonic.delta - 0.640) <= 0.05;
  std::string occ;
  for (const auto& b : obs.bands) occ += fmt::format("{:+.3f} ", b.delta_n_el());
  return {energy && delta && signs,
          fmt::format("chi <= {}: E = {:.4f} eV (target 115.029 +/- 0.005) {}; Delta = {:.4f} eV "
                      "(target 0.640 +/- 0.05) {}; delta_n_el [{}] {}; VQE soft gate is "
                      "report-only and not run here (dfvqe reproduce wte2)",
                      ctx.settings.wte2_chi, r.energy, energy ? "ok" : "MISS", obs.excitonic.delta,
                      delta ? "ok" : "MISS", occ, signs ? "ok" : "MISS")};
}

// 9: SrVO3 resources, plus charge order on the 2x2 three-band reduction.
Outcome srvo3(Context& ctx) {
  const auto full = material("srvo3");
  const auto res = resource_report(full, CircuitCounts{584, 1168}, 0.999, 1e-3);
  const bool resources = res.n_q == 54 && res.n_terms == 423 &&
                         std::abs(res.circuit_fidelity - 0.558) <= 1e-3;

  // ED validation of the DMRG charge order on the band-reduced (16-qubit) cell
  const auto two_band = with_bands(with_lattice(full, 2, 2), 2);
  const auto o2 = build_ordering(two_band);
  const auto ed = ed_ground_state(two_band, two_band.num_electrons());
  const double phi_ed =
      charge_disproportionation(SectorState{ed.basis, ed.amplitudes.cast<cx>()}, two_band, o2).phi;
  const auto d2 = dmrg_ground_state(two_band, o2, exact_dmrg_config());
  const double phi_d2 = charge_disproportionation(d2.state, two_band, o2).phi;
  const bool validated = relative(d2.energy, ed.energy) <= 1e-8 && std::abs(phi_d2 - phi_ed) <= 1e-6;

  const auto cell = with_lattice(full, 2, 2);
  const auto o3 = build_ordering(cell);
  DmrgConfig c;
  c.chi_schedule = default_chi_schedule(ctx.settings.srvo3_chi);
  const auto d3 = dmrg_ground_state(cell, o3, c);
  const double phi = charge_disproportionation(d3.state, cell, o3).phi;
  // Phi below 1e-6 is numerical noise, not charge order
  const bool ordered = phi > 1e-6;
  return {resources && validated && ordered,
          fmt::format("resources n_q {}, n_terms {}, F(584) {:.2f}% {}; 2x2x2 ED/DMRG Phi {:.1e}/{:.1e} {}; "
                      "2x2x3 DMRG (chi <= {}) E = {:.6f} eV, Phi = {:.2e} {}",
                      res.n_q, res.n_terms, 100.0 * res.circuit_fidelity, resources ? "ok" : "MISS",
                      phi_ed, phi_d2, validated ? "ok" : "MISS", ctx.settings.srvo3_chi, d3.energy,
                      phi, ordered ? "ok" : "MISS (no charge order)")};
}

// 10: nearest-neighbour 1-norms bounded by the all-neighbour values.
Outcome one_norms(Context&) {
  bool ok = true;
  std::string detail;
  for (auto [name, bound] : {std::pair{"ca2cuo3", 2.67e2}, std::pair{"wte2", 3.31e2},
                             std::pair{"srvo3", 2.315e3}}) {
    const double n = one_norm(material(name));
    ok = ok && n > 0.0 && n <= bound;
    detail += fmt::format("{} {:.1f} <= {:g}; ", name, n, bound);
  }
  return {ok, detail};
}

// 11: VQE invariants.
Outcome vqe_invariants(Context& ctx) {
  std::mt19937_64 rng(ctx.settings.seed + 77);
  std::vector<std::string> failures;
  double drift = 0.0, bound_violation = 0.0, grad_rel = 0.0, fd_rel = 0.0, identity = 0.0;
  bool deterministic = true, fidelity_kept = true, monotone = true, flat_ok = true;

  const int shapes[][3] = {{3, 1, 1}, {2, 2, 1}, {2, 1, 2}, {6, 1, 1}, {3, 2, 1}, {1, 1, 3}};
  for (const auto& sh : shapes)
    for (auto kind : {AnsatzKind::np, AnsatzKind::ep}) {
      const auto model = random_model(rng, sh[0], sh[1], sh[2]);
      const auto ordering = build_ordering(model);
      const auto ansatz = build_ansatz(model, ordering, kind, 2);
      const FockBasis basis(model.num_spin_orbitals(), model.num_electrons());
      const auto ed = ed_ground_state(model, model.num_electrons());
      const auto init = MatrixProductState<double>::product_state(filling_bits(model, ordering));
      const Eigen::VectorXcd initial = sector_amplitudes(init, basis);
      const Eigen::VectorXcd reference = ed.amplitudes.cast<cx>();
      const auto h = sector_hamiltonian(expand_terms(model), ordering, basis);
      const SectorBackend adjoint(ansatz, basis, h, initial, reference, GradientMethod::adjoint);
      const SectorBackend fd(ansatz, basis, h, initial, reference, GradientMethod::central_difference);

      // identity at zero parameters
      const Eigen::VectorXd zero = Eigen::VectorXd::Zero(ansatz.num_parameters());
      identity = std::max(identity, (adjoint.evolve(zero) - initial).norm());

      // number conservation on the full register
      const auto theta = random_theta(ansatz.num_parameters(), rng, 1.0);
      const Eigen::VectorXcd dense = apply_circuit_dense(ansatz, theta, embed(basis, initial));
      double number = 0.0, norm = 0.0;
      for (Eigen::Index i = 0; i < dense.size(); ++i) {
        number += std::norm(dense(i)) * std::popcount(static_cast<std::uint64_t>(i));
        norm += std::norm(dense(i));
      }
      drift = std::max(drift, std::abs(number / norm - model.num_electrons()));

      // variational bound at random points
      for (int k = 0; k < 3; ++k)
        bound_violation = std::max(
            bound_violation, ed.energy - adjoint.energy(random_theta(ansatz.num_parameters(), rng, 1.0)));

      // gradients: adjoint against central differences
      Eigen::VectorXd ga, gf;
      adjoint.energy(theta, &ga);
      fd.energy(theta, &gf);
      // some small NP instances have a flat landscape; compare absolutely there
      const double scale = std::max(ga.norm(), gf.norm());
      if (scale < 1e-8)
        flat_ok = flat_ok && (ga - gf).norm() <= 1e-8;
      else
        grad_rel = std::max(grad_rel, (ga - gf).norm() / scale);

      // short optimisation: bound, determinism, monotone trace, fidelity safeguard
      OptimizerConfig config;
      config.restarts = 2;
      config.max_iters = 60;
      config.seed = ctx.settings.seed + 5;
      const auto a = run_restarts(adjoint, config);
      const auto b = run_restarts(adjoint, config);
      deterministic = deterministic && a.best_energy == b.best_energy &&
                      a.best_parameters == b.best_parameters;
      bound_violation = std::max(bound_violation, ed.energy - a.best_energy);
      for (const auto& r : a.restarts) {
        for (std::size_t i = 1; i < r.energy_phase.trace.size(); ++i)
          monotone = monotone && r.energy_phase.trace[i] <= r.energy_phase.trace[i - 1] + 1e-10;
        if (r.overlap_phase)
          fidelity_kept = fidelity_kept && r.overlap_phase->value >= r.overlap_phase->initial_value;
      }
    }

  // finite differences against a five-point stencil on 6-qubit instances
  for (int instance = 0; instance < 3; ++instance) {
    const auto model = random_model(rng, 3, 1, 1);
    const auto ordering = build_ordering(model);
    const auto ansatz = build_ansatz(model, ordering, instance % 2 ? AnsatzKind::ep : AnsatzKind::np, 2);
    const FockBasis basis(6, 3);
    const auto init = MatrixProductState<double>::product_state(filling_bits(model, ordering));
    const SectorBackend backend(ansatz, basis, sector_hamiltonian(expand_terms(model), ordering, basis),
                                sector_amplitudes(init, basis), std::nullopt,
                                GradientMethod::central_difference);
    const auto theta = random_theta(ansatz.num_parameters(), rng, 0.5);
    Eigen::VectorXd g;
    backend.energy(theta, &g);
    Eigen::VectorXd ref(theta.size());
    const double h = 1e-3;
    Eigen::VectorXd x = theta;
    for (Eigen::Index p = 0; p < theta.size(); ++p) {
      auto at = [&](double s) {
        x(p) = theta(p) + s * h;
        const double e = backend.energy(x);
        x(p) = theta(p);
        return e;
      };
      ref(p) = (-at(2) + 8 * at(1) - 8 * at(-1) + at(-2)) / (12 * h);
    }
    fd_rel = std::max(fd_rel, (g - ref).norm() / ref.norm());
  }

  const bool ok = drift <= 1e-9 && bound_violation <= 1e-9 && deterministic && grad_rel <= 1e-4 && flat_ok &&
                  fd_rel <= 1e-4 && identity <= 1e-12 && fidelity_kept && monotone;
  return {ok, fmt::format("N drift {:.1e}, bound violation {:.1e}, deterministic {}, adjoint/FD {:.1e}{}, "
                          "FD/5-point {:.1e}, identity {:.1e}, overlap safeguard {}, monotone {}",
                          drift, std::max(0.0, bound_violation), deterministic, grad_rel,
                          flat_ok ? "" : " (flat-landscape mismatch)", fd_rel,
                          identity, fidelity_kept, monotone)};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome(Context&)> run;
};

}  // namespace
}  // namespace dfvqe

int main(int argc, char** argv) {
  using namespace dfvqe;
  CLI::App app{"dfvqe acceptance checks"};
  Settings settings;
  std::vector<int> only;
  std::string log_level = "warn";
  app.add_option("--only", only, "Criteria to run (default: all)")->delimiter(',');
  app.add_option("--ca-restarts", settings.ca_restarts, "Ca2CuO3 VQE restarts");
  app.add_option("--wte2-chi", settings.wte2_chi, "WTe2 DMRG bond cap");
  app.add_option("--srvo3-chi", settings.srvo3_chi, "SrVO3 2x2 DMRG bond cap");
  app.add_option("--seed", settings.seed, "Base seed");
  app.add_option("--log-level", log_level, "spdlog level");
  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::from_str(log_level));

  const std::vector<Criterion> criteria = {
      {1, "term-count exactness", term_counts},
      {2, "circuit-fidelity exactness", fidelities},
      {3, "encoding correctness", encoding},
      {4, "ED / DMRG cross-validation", cross_validation},
      {5, "Ca2CuO3 DMRG ground truth", ca_dmrg},
      {6, "Ca2CuO3 VQE", ca_vqe},
      {7, "antiferromagnetic signature", ca_afm},
      {8, "WTe2 excitonic diagnostics", wte2},
      {9, "SrVO3 resources and charge order", srvo3},
      {10, "one-norm bound", one_norms},
      {11, "VQE invariant suite", vqe_invariants},
  };
  const std::set<int> selected(only.begin(), only.end());
  Context ctx{settings, std::nullopt, std::nullopt};
  int failed = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run(ctx);
    } catch (const std::exception& e) {
      out = {false, fmt::format("exception: {}", e.what())};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fmt::print("[{}] {:>2}. {}: {} ({:.1f} s)\n", out.pass ? "PASS" : "FAIL", c.id, c.title,
               out.detail, secs);
    std::fflush(stdout);
    if (!out.pass) ++failed;
  }
  fmt::print("{} criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
