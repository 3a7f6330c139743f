// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfvqe/vqe/vqe.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <utility>

#include <ceres/ceres.h>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "dfvqe/core/error.hpp"
#include "dfvqe/encode/jordan_wigner.hpp"

namespace dfvqe {

namespace {

std::string lowercase(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

constexpr double kInfidelityFloor = 1e-16;
// |<ref|psi>|^2 of two equal normalised vectors lands within a few ulps of 1.
constexpr double kRoundingSlack = 64 * std::numeric_limits<double>::epsilon();

using ObjectiveFn = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*)>;

// Objective seen by Ceres. Remembers the lowest value evaluated; failures
// and non-finite values are reported to the line search as rejected steps.
class Objective final : public ceres::FirstOrderFunction {
 public:
  Objective(ObjectiveFn f, int n) : f_(std::move(f)), n_(n) {}

  bool Evaluate(const double* const parameters, double* cost, double* gradient) const override {
    const Eigen::Map<const Eigen::VectorXd> x(parameters, n_);
    Eigen::VectorXd grad;
    double value = 0.0;
    ++evaluations_;
    try {
      value = f_(x, gradient ? &grad : nullptr);
    } catch (const NumericalError& e) {
      spdlog::warn("objective evaluation failed: {}", e.what());
      failed_ = true;
      return false;
    }
    if (!std::isfinite(value) || (gradient && !grad.allFinite())) return false;
    *cost = value;
    if (gradient) Eigen::Map<Eigen::VectorXd>(gradient, n_) = grad;
    if (best_x_.size() == 0 || value < best_value_) {
      best_value_ = value;
      best_x_ = x;
    }
    return true;
  }
  int NumParameters() const override { return n_; }

  const Eigen::VectorXd& best_x() const { return best_x_; }
  double best_value() const { return best_value_; }
  int evaluations() const { return evaluations_; }
  bool failed() const { return failed_; }

 private:
  ObjectiveFn f_;
  int n_;
  mutable Eigen::VectorXd best_x_;
  mutable double best_value_ = 0.0;
  mutable int evaluations_ = 0;
  mutable bool failed_ = false;
};

class StopRule final : public ceres::IterationCallback {
 public:
  StopRule(double value_tol, double grad_tol) : value_tol_(value_tol), grad_tol_(grad_tol) {}

  ceres::CallbackReturnType operator()(const ceres::IterationSummary& s) override {
    trace.push_back(s.cost);
    if (s.gradient_max_norm < grad_tol_) {
      reason = Termination::gradient_tolerance;
      return ceres::SOLVER_TERMINATE_SUCCESSFULLY;
    }
    if (s.iteration > 0 && std::abs(s.cost_change) < value_tol_) {
      reason = Termination::energy_tolerance;
      return ceres::SOLVER_TERMINATE_SUCCESSFULLY;
    }
    return ceres::SOLVER_CONTINUE;
  }

  std::optional<Termination> reason;
  std::vector<double> trace;

 private:
  double value_tol_;
  double grad_tol_;
};

struct Minimised {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  Termination termination = Termination::max_iterations;
  std::vector<double> trace;
};

Minimised minimise(ObjectiveFn f, const Eigen::VectorXd& x0, const OptimizerConfig& config) {
  const int n = static_cast<int>(x0.size());
  auto* objective = new Objective(std::move(f), n);
  ceres::GradientProblem problem(objective);  // takes ownership
  StopRule stop(config.energy_tol, config.grad_tol);

  ceres::GradientProblemSolver::Options options;
  options.line_search_direction_type = ceres::LBFGS;
  options.max_lbfgs_rank = config.lbfgs_memory;
  options.max_num_iterations = config.max_iters;
  // Stopping is decided by StopRule; Ceres' own tests are effectively off.
  options.function_tolerance = 1e-300;
  options.gradient_tolerance = 1e-300;
  options.parameter_tolerance = 1e-300;
  options.logging_type = ceres::SILENT;
  options.minimizer_progress_to_stdout = false;
  options.callbacks.push_back(&stop);

  Eigen::VectorXd x = x0;
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(options, problem, x.data(), &summary);

  Minimised out;
  out.iterations = std::max(0, static_cast<int>(summary.iterations.size()) - 1);
  out.evaluations = objective->evaluations();
  out.trace = std::move(stop.trace);
  if (stop.reason) {
    out.termination = *stop.reason;
  } else if (summary.termination_type == ceres::NO_CONVERGENCE) {
    out.termination = Termination::max_iterations;
  } else if (summary.termination_type == ceres::CONVERGENCE) {
    out.termination = Termination::energy_tolerance;
  } else {
    out.termination =
        objective->failed() ? Termination::numerical_failure : Termination::line_search_failure;
    spdlog::debug("L-BFGS stopped: {}", summary.message);
  }
  if (objective->best_x().size() == 0) {
    out.x = x0;
    out.termination = Termination::numerical_failure;
    out.value = std::numeric_limits<double>::quiet_NaN();
  } else {
    out.x = objective->best_x();
    out.value = objective->best_value();
  }
  return out;
}

}  // namespace

std::string to_string(Phase2 phase) {
  return phase == Phase2::overlap_infidelity ? "overlap_infidelity" : "none";
}

Phase2 parse_phase2(std::string_view text) {
  const auto s = lowercase(text);
  if (s == "overlap_infidelity" || s == "overlap") return Phase2::overlap_infidelity;
  if (s == "none") return Phase2::none;
  throw ValidationError(fmt::format("unknown phase2 '{}' (expected overlap_infidelity or none)", text));
}

std::string to_string(Termination reason) {
  switch (reason) {
    case Termination::energy_tolerance: return "energy_tolerance";
    case Termination::gradient_tolerance: return "gradient_tolerance";
    case Termination::max_iterations: return "max_iterations";
    case Termination::already_converged: return "already_converged";
    case Termination::line_search_failure: return "line_search_failure";
    case Termination::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

std::string to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::automatic: return "automatic";
    case BackendKind::sector: return "sector";
    case BackendKind::mps: return "mps";
  }
  return "unknown";
}

BackendKind parse_backend_kind(std::string_view text) {
  const auto s = lowercase(text);
  if (s == "automatic" || s == "auto") return BackendKind::automatic;
  if (s == "sector") return BackendKind::sector;
  if (s == "mps") return BackendKind::mps;
  throw ValidationError(fmt::format("unknown backend '{}' (expected auto, sector or mps)", text));
}

void OptimizerConfig::validate() const {
  if (restarts < 1) throw ValidationError(fmt::format("restarts must be >= 1 (got {})", restarts));
  if (!(init_std >= 0.0) || !std::isfinite(init_std))
    throw ValidationError("init_std must be finite and >= 0");
  if (!(energy_tol > 0.0)) throw ValidationError("energy_tol must be > 0");
  if (!(grad_tol > 0.0)) throw ValidationError("grad_tol must be > 0");
  if (!(fd_step > 0.0)) throw ValidationError("fd_step must be > 0");
  if (max_iters < 1) throw ValidationError(fmt::format("max_iters must be >= 1 (got {})", max_iters));
  if (lbfgs_memory < 1)
    throw ValidationError(fmt::format("lbfgs_memory must be >= 1 (got {})", lbfgs_memory));
}

Eigen::VectorXd initial_parameters(int count, const OptimizerConfig& config, int restart) {
  std::mt19937_64 rng(config.seed ^ static_cast<std::uint64_t>(restart));
  std::normal_distribution<double> normal(0.0, config.init_std > 0.0 ? config.init_std : 1.0);
  Eigen::VectorXd theta(count);
  for (int i = 0; i < count; ++i) theta(i) = config.init_std > 0.0 ? normal(rng) : 0.0;
  return theta;
}

PhaseOutcome energy_phase(const CircuitBackend& backend, const Eigen::VectorXd& theta0,
                          const OptimizerConfig& config) {
  config.validate();
  if (theta0.size() != backend.num_parameters())
    throw DimensionError("energy_phase: parameter vector has the wrong length");
  PhaseOutcome out;
  out.initial_value = backend.energy(theta0);
  auto m = minimise(
      [&backend](const Eigen::VectorXd& x, Eigen::VectorXd* g) { return backend.energy(x, g); },
      theta0, config);
  out.parameters = std::move(m.x);
  out.value = m.termination == Termination::numerical_failure && std::isnan(m.value)
                  ? out.initial_value
                  : m.value;
  out.iterations = m.iterations;
  out.evaluations = m.evaluations;
  out.termination = m.termination;
  out.trace = std::move(m.trace);
  return out;
}

PhaseOutcome overlap_phase(const CircuitBackend& backend, const Eigen::VectorXd& theta0,
                           const OptimizerConfig& config) {
  config.validate();
  if (!backend.has_reference()) throw ValidationError("overlap_phase: backend has no reference");
  if (theta0.size() != backend.num_parameters())
    throw DimensionError("overlap_phase: parameter vector has the wrong length");
  PhaseOutcome out;
  out.initial_value = backend.fidelity(theta0);
  out.parameters = theta0;
  out.value = out.initial_value;
  if (1.0 - out.initial_value < kInfidelityFloor + kRoundingSlack) {
    out.termination = Termination::already_converged;
    out.evaluations = 1;
    return out;
  }
  auto loss = [&backend](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
    Eigen::VectorXd dfid;
    const double f = backend.fidelity(x, g ? &dfid : nullptr);
    const double inf = 1.0 - f;
    if (inf < kInfidelityFloor) {
      if (g) g->setZero(x.size());
      return std::log10(kInfidelityFloor);
    }
    if (g) *g = -dfid / (inf * std::log(10.0));
    return std::log10(inf);
  };
  auto m = minimise(loss, theta0, config);
  out.iterations = m.iterations;
  out.evaluations = m.evaluations + 1;
  out.termination = m.termination;
  out.trace = std::move(m.trace);
  if (m.x.size() == theta0.size() && std::isfinite(m.value)) {
    const double f = backend.fidelity(m.x);
    if (f > out.initial_value) {
      out.parameters = std::move(m.x);
      out.value = f;
    }
  }
  return out;
}

VqeResult run_restarts(const CircuitBackend& backend, const OptimizerConfig& config,
                       const RestartObserver& observer) {
  config.validate();
  const int n = backend.num_parameters();
  VqeResult result;
  result.backend = backend.name();
  result.num_parameters = n;
  result.two_qubit_gates = backend.ansatz().two_qubit_gate_count();
  result.initial_energy = backend.energy(Eigen::VectorXd::Zero(n));
  const bool phase2 = config.phase2 == Phase2::overlap_infidelity && backend.has_reference();

  for (int r = 0; r < config.restarts; ++r) {
    RestartRecord rec;
    rec.restart = r;
    rec.seed = config.seed ^ static_cast<std::uint64_t>(r);
    const Eigen::VectorXd theta0 = initial_parameters(n, config, r);
    try {
      rec.energy_phase = energy_phase(backend, theta0, config);
      Eigen::VectorXd theta = rec.energy_phase.parameters;
      rec.iterations = rec.energy_phase.iterations;
      rec.termination = rec.energy_phase.termination;
      if (phase2) {
        rec.overlap_phase = overlap_phase(backend, theta, config);
        theta = rec.overlap_phase->parameters;
        rec.iterations += rec.overlap_phase->iterations;
        rec.termination = rec.overlap_phase->termination;
      }
      rec.energy = backend.energy(theta);
      if (backend.has_reference()) rec.fidelity = backend.fidelity(theta);
      if (result.best_restart < 0 || rec.energy < result.best_energy) {
        result.best_restart = r;
        result.best_energy = rec.energy;
        result.best_fidelity = rec.fidelity;
        result.best_parameters = theta;
      }
    } catch (const NumericalError& e) {
      spdlog::warn("restart {} aborted: {}", r, e.what());
      rec.termination = Termination::numerical_failure;
      rec.energy = std::numeric_limits<double>::quiet_NaN();
    }
    spdlog::info("restart {}: E = {:.8f} eV, F = {:.6f}, {} iterations ({})", r, rec.energy,
                 rec.fidelity, rec.iterations, to_string(rec.termination));
    if (observer) observer(rec);
    result.restarts.push_back(std::move(rec));
  }
  if (result.best_restart < 0) throw NumericalError("every VQE restart failed");
  return result;
}

int default_vqe_chi(int num_qubits) {
  const int chi = max_chi_default(num_qubits);
  return num_qubits >= 32 ? std::min(chi, 512) : chi;
}

double sector_dimension(int num_qubits, int num_particles) {
  if (num_particles < 0 || num_particles > num_qubits) return 0.0;
  return std::round(std::exp(std::lgamma(num_qubits + 1.0) - std::lgamma(num_particles + 1.0) -
                             std::lgamma(num_qubits - num_particles + 1.0)));
}

namespace {

Eigen::VectorXcd sector_vector(const MatrixProductState<double>& psi, const FockBasis& basis,
                               std::string_view what) {
  Eigen::VectorXcd v = sector_amplitudes(psi, basis);
  const double norm = v.norm();
  if (!(norm > 0.0)) throw NumericalError(fmt::format("{} state has no weight in the sector", what));
  if (std::abs(norm - 1.0) > 1e-6)
    spdlog::warn("{} state has weight {:.3e} outside the N = {} sector; renormalised", what,
                 1.0 - norm * norm, basis.num_particles());
  return v / norm;
}

}  // namespace

std::unique_ptr<CircuitBackend> make_backend(const ExtendedHubbardModel& model,
                                             const QubitOrdering& ordering,
                                             const AnsatzSpec& ansatz,
                                             const MatrixProductState<double>& initial,
                                             const MatrixProductState<double>* reference,
                                             const VqeSetup& setup, const OptimizerConfig& config) {
  const int n = model.num_spin_orbitals();
  if (ansatz.num_qubits != n || initial.num_qubits() != n ||
      (reference && reference->num_qubits() != n))
    throw DimensionError("make_backend: model, ansatz and states disagree on the qubit count");
  const int electrons = model.num_electrons();
  BackendKind kind = setup.backend;
  if (kind == BackendKind::automatic)
    kind = sector_dimension(n, electrons) <= setup.sector_limit ? BackendKind::sector
                                                                 : BackendKind::mps;
  if (kind == BackendKind::sector) {
    FockBasis basis(n, electrons);
    auto h = sector_hamiltonian(expand_terms(model, setup.policy), ordering, basis);
    auto init = sector_vector(initial, basis, "initial");
    std::optional<Eigen::VectorXcd> ref;
    if (reference) ref = sector_vector(*reference, basis, "reference");
    return std::make_unique<SectorBackend>(ansatz, std::move(basis), std::move(h),
                                           std::move(init), std::move(ref), config.gradient,
                                           config.fd_step);
  }
  if (config.gradient == GradientMethod::adjoint)
    throw ValidationError("adjoint gradients need the sector backend");
  const int chi = setup.chi > 0 ? setup.chi : default_vqe_chi(n);
  auto h = assemble_mpo<double>(qubit_hamiltonian(model, ordering, setup.policy)).cast<cx>();
  std::optional<MatrixProductState<cx>> ref;
  if (reference) ref = reference->cast<cx>();
  return std::make_unique<MpsBackend>(ansatz, std::move(h), initial.cast<cx>(),
                                      TruncationPolicy{chi, setup.dmrg.truncation_cutoff},
                                      std::move(ref), config.fd_step);
}

VqeRun run_vqe(const ExtendedHubbardModel& model, const QubitOrdering& ordering,
               const AnsatzSpec& ansatz, const OptimizerConfig& config, const VqeSetup& setup,
               const RestartObserver& observer) {
  model.validate();
  config.validate();
  VqeRun run;
  if (setup.reference) {
    run.reference = *setup.reference;
  } else if (setup.compute_reference) {
    spdlog::info("VQE reference: DMRG on {}", model.name);
    run.reference = dmrg_ground_state(model, ordering, setup.dmrg, setup.policy);
  }
  spdlog::info("VQE initial state: noninteracting ground state");
  run.initial_state = noninteracting_ground_state(model, model.filling, ordering, setup.dmrg);
  run.backend = make_backend(model, ordering, ansatz, run.initial_state.state,
                             run.reference ? &run.reference->state : nullptr, setup, config);
  spdlog::info("VQE backend {}: {} parameters, {} two-qubit gates", run.backend->name(),
               ansatz.num_parameters(), ansatz.two_qubit_gate_count());
  run.result = run_restarts(*run.backend, config, observer);
  if (run.reference) run.result.reference_energy = run.reference->energy;
  return run;
}

}  // namespace dfvqe
