// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfvqe/vqe/simulator.hpp"

#include <bit>
#include <cctype>
#include <functional>
#include <limits>
#include <utility>

#include <fmt/format.h>

#include "dfvqe/core/error.hpp"

namespace dfvqe {

std::string to_string(GradientMethod method) {
  switch (method) {
    case GradientMethod::automatic: return "automatic";
    case GradientMethod::adjoint: return "adjoint";
    case GradientMethod::central_difference: return "central_difference";
  }
  return "unknown";
}

GradientMethod parse_gradient_method(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "automatic" || lower == "auto") return GradientMethod::automatic;
  if (lower == "adjoint") return GradientMethod::adjoint;
  if (lower == "central_difference" || lower == "fd") return GradientMethod::central_difference;
  throw ValidationError(fmt::format("unknown gradient method '{}'", text));
}

namespace {

std::uint64_t between_mask(int a, int b) {
  const int lo = std::min(a, b), hi = std::max(a, b);
  const std::uint64_t below_hi = (std::uint64_t{1} << hi) - 1;
  const std::uint64_t up_to_lo = (std::uint64_t{2} << lo) - 1;
  return below_hi & ~up_to_lo;
}

void check_theta(const AnsatzSpec& ansatz, const Eigen::VectorXd& theta) {
  if (theta.size() != ansatz.num_parameters())
    throw DimensionError(fmt::format("expected {} parameters, got {}", ansatz.num_parameters(),
                                     theta.size()));
}

Gate4 gate_matrix(const GateOp& g, const Eigen::VectorXd& theta) {
  return two_qubit_matrix(g.kind, theta(g.param), theta(g.param + 1));
}

}  // namespace

// Indices of the sector states grouped by the local pattern |q_a q_b>.
struct SectorBackend::PairTable {
  int a = 0;
  int b = 0;
  std::vector<std::int32_t> i00, i11;
  std::vector<std::int32_t> i01, i10;  // partners: i01[k] <-> i10[k]
  std::vector<std::int8_t> parity;     // (-1)^{occupied qubits strictly between a and b}
};

SectorBackend::SectorBackend(AnsatzSpec ansatz, FockBasis basis,
                             Eigen::SparseMatrix<double> hamiltonian, Eigen::VectorXcd initial,
                             std::optional<Eigen::VectorXcd> reference, GradientMethod method,
                             double fd_step)
    : ansatz_(std::move(ansatz)),
      basis_(std::move(basis)),
      hamiltonian_(std::move(hamiltonian)),
      initial_(std::move(initial)),
      reference_(std::move(reference)),
      method_(method),
      fd_step_(fd_step) {
  const Eigen::Index dim = basis_.dimension();
  if (ansatz_.num_qubits != basis_.num_qubits())
    throw DimensionError("sector backend: ansatz and basis disagree on the qubit count");
  if (dim > std::numeric_limits<std::int32_t>::max())
    throw DimensionError("sector backend: sector too large for 32-bit tables");
  if (hamiltonian_.rows() != dim || hamiltonian_.cols() != dim)
    throw DimensionError("sector backend: Hamiltonian does not match the basis");
  if (initial_.size() != dim) throw DimensionError("sector backend: initial state size");
  if (reference_ && reference_->size() != dim)
    throw DimensionError("sector backend: reference state size");
  if (!(fd_step_ > 0.0)) throw ValidationError("sector backend: fd_step must be > 0");

  for (const auto& g : ansatz_.gates) {
    if (g.b < 0) {
      table_of_gate_.push_back(-1);
      continue;
    }
    int found = -1;
    for (std::size_t t = 0; t < tables_.size(); ++t)
      if (tables_[t]->a == g.a && tables_[t]->b == g.b) found = static_cast<int>(t);
    if (found < 0) {
      auto t = std::make_unique<PairTable>();
      t->a = g.a;
      t->b = g.b;
      const std::uint64_t ma = std::uint64_t{1} << g.a, mb = std::uint64_t{1} << g.b;
      const std::uint64_t between = between_mask(g.a, g.b);
      for (Eigen::Index i = 0; i < dim; ++i) {
        const std::uint64_t s = basis_.state(i);
        const bool qa = (s & ma) != 0, qb = (s & mb) != 0;
        const auto idx = static_cast<std::int32_t>(i);
        if (qa && qb) {
          t->i11.push_back(idx);
        } else if (!qa && !qb) {
          t->i00.push_back(idx);
        } else if (qb) {
          t->i01.push_back(idx);
          t->i10.push_back(static_cast<std::int32_t>(basis_.index(s ^ ma ^ mb)));
          t->parity.push_back(std::popcount(s & between) % 2 ? -1 : 1);
        }
      }
      tables_.push_back(std::move(t));
      found = static_cast<int>(tables_.size()) - 1;
    }
    table_of_gate_.push_back(found);
  }
}

SectorBackend::~SectorBackend() = default;

void SectorBackend::apply(const GateOp& g, const Eigen::VectorXd& theta, Eigen::VectorXcd& psi,
                          bool adjoint) const {
  const std::size_t k = static_cast<std::size_t>(&g - ansatz_.gates.data());
  if (g.b < 0) {
    const double angle = adjoint ? -theta(g.param) : theta(g.param);
    const cx lo = std::polar(1.0, -0.5 * angle), hi = std::polar(1.0, 0.5 * angle);
    const std::uint64_t m = std::uint64_t{1} << g.a;
    for (Eigen::Index i = 0; i < psi.size(); ++i) psi(i) *= (basis_.state(i) & m) ? hi : lo;
    return;
  }
  const Gate4 full = gate_matrix(g, theta);
  const Gate4 u = adjoint ? Gate4(full.adjoint()) : full;
  const PairTable& t = *tables_[static_cast<std::size_t>(table_of_gate_[k])];
  if (u(0, 0) != cx(1.0))
    for (auto i : t.i00) psi(i) *= u(0, 0);
  if (u(3, 3) != cx(1.0))
    for (auto i : t.i11) psi(i) *= u(3, 3);
  for (std::size_t p = 0; p < t.i01.size(); ++p) {
    const double s = g.fermionic ? t.parity[p] : 1.0;
    const cx x = psi(t.i01[p]), y = psi(t.i10[p]);
    psi(t.i01[p]) = u(1, 1) * x + s * u(1, 2) * y;
    psi(t.i10[p]) = s * u(2, 1) * x + u(2, 2) * y;
  }
}

void SectorBackend::apply_derivative(const GateOp& g, const Eigen::VectorXd& theta, int which,
                                     const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
  out.setZero(in.size());
  if (g.b < 0) {
    const Gate2 d = rz_derivative(theta(g.param));
    const std::uint64_t m = std::uint64_t{1} << g.a;
    for (Eigen::Index i = 0; i < in.size(); ++i)
      out(i) = ((basis_.state(i) & m) ? d(1, 1) : d(0, 0)) * in(i);
    return;
  }
  const std::size_t k = static_cast<std::size_t>(&g - ansatz_.gates.data());
  const Gate4 d = two_qubit_derivative(g.kind, theta(g.param), theta(g.param + 1), which);
  const PairTable& t = *tables_[static_cast<std::size_t>(table_of_gate_[k])];
  if (d(0, 0) != cx(0.0))
    for (auto i : t.i00) out(i) = d(0, 0) * in(i);
  if (d(3, 3) != cx(0.0))
    for (auto i : t.i11) out(i) = d(3, 3) * in(i);
  if (which == 1) return;  // the phase parameter only touches |11>
  for (std::size_t p = 0; p < t.i01.size(); ++p) {
    const double s = g.fermionic ? t.parity[p] : 1.0;
    const cx x = in(t.i01[p]), y = in(t.i10[p]);
    out(t.i01[p]) = d(1, 1) * x + s * d(1, 2) * y;
    out(t.i10[p]) = s * d(2, 1) * x + d(2, 2) * y;
  }
}

Eigen::VectorXcd SectorBackend::evolve(const Eigen::VectorXd& theta) const {
  check_theta(ansatz_, theta);
  Eigen::VectorXcd psi = initial_;
  for (const auto& g : ansatz_.gates) apply(g, theta, psi, false);
  return psi;
}

Eigen::VectorXcd SectorBackend::apply_hamiltonian(const Eigen::VectorXcd& psi) const {
  const Eigen::VectorXd re = hamiltonian_ * psi.real();
  const Eigen::VectorXd im = hamiltonian_ * psi.imag();
  Eigen::VectorXcd out(psi.size());
  out.real() = re;
  out.imag() = im;
  return out;
}

Eigen::VectorXd SectorBackend::adjoint_gradient(const Eigen::VectorXd& theta, Eigen::VectorXcd psi,
                                                Eigen::VectorXcd lambda) const {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(theta.size());
  Eigen::VectorXcd scratch(psi.size());
  for (auto it = ansatz_.gates.rbegin(); it != ansatz_.gates.rend(); ++it) {
    const GateOp& g = *it;
    apply(g, theta, psi, true);
    for (int which = 0; which < g.num_params(); ++which) {
      apply_derivative(g, theta, which, psi, scratch);
      grad(g.param + which) = 2.0 * std::real(lambda.dot(scratch));
    }
    apply(g, theta, lambda, true);
  }
  return grad;
}

double SectorBackend::energy(const Eigen::VectorXd& theta, Eigen::VectorXd* grad) const {
  const Eigen::VectorXcd psi = evolve(theta);
  Eigen::VectorXcd h_psi = apply_hamiltonian(psi);
  const double e = std::real(psi.dot(h_psi));
  if (grad) {
    if (method_ == GradientMethod::central_difference)
      *grad = central_difference([this](const Eigen::VectorXd& x) { return energy(x); }, theta,
                                 fd_step_);
    else
      *grad = adjoint_gradient(theta, psi, std::move(h_psi));
  }
  return e;
}

double SectorBackend::fidelity(const Eigen::VectorXd& theta, Eigen::VectorXd* grad) const {
  if (!reference_) throw ValidationError("sector backend: no reference state");
  const Eigen::VectorXcd psi = evolve(theta);
  const cx ov = reference_->dot(psi);
  if (grad) {
    if (method_ == GradientMethod::central_difference)
      *grad = central_difference([this](const Eigen::VectorXd& x) { return fidelity(x); }, theta,
                                 fd_step_);
    else
      *grad = adjoint_gradient(theta, psi, ov * *reference_);
  }
  return std::norm(ov);
}

CircuitState SectorBackend::state(const Eigen::VectorXd& theta) const {
  return SectorState{basis_, evolve(theta)};
}

MpsBackend::MpsBackend(AnsatzSpec ansatz, MatrixProductOperator<cx> hamiltonian,
                       MatrixProductState<cx> initial, TruncationPolicy policy,
                       std::optional<MatrixProductState<cx>> reference, double fd_step)
    : ansatz_(std::move(ansatz)),
      hamiltonian_(std::move(hamiltonian)),
      initial_(std::move(initial)),
      policy_(policy),
      reference_(std::move(reference)),
      fd_step_(fd_step) {
  const int n = ansatz_.num_qubits;
  if (hamiltonian_.num_qubits() != n || initial_.num_qubits() != n)
    throw DimensionError("mps backend: operator, state and ansatz disagree on the qubit count");
  if (reference_ && reference_->num_qubits() != n)
    throw DimensionError("mps backend: reference state has the wrong qubit count");
  if (!(fd_step_ > 0.0)) throw ValidationError("mps backend: fd_step must be > 0");
  initial_.set_policy(policy_);
  initial_.normalize();
  if (reference_) reference_->normalize();
}

MatrixProductState<cx> MpsBackend::evolve(const Eigen::VectorXd& theta) const {
  check_theta(ansatz_, theta);
  MatrixProductState<cx> psi = initial_;
  for (const auto& g : ansatz_.gates) {
    if (g.b < 0)
      psi.apply_single(g.a, rz_matrix(theta(g.param)));
    else
      psi.apply_gate(g.a, g.b, gate_matrix(g, theta), g.fermionic);
  }
  psi.normalize();
  return psi;
}

double MpsBackend::energy_value(const Eigen::VectorXd& theta) const {
  return expectation_real(evolve(theta), hamiltonian_);
}

double MpsBackend::fidelity_value(const Eigen::VectorXd& theta) const {
  if (!reference_) throw ValidationError("mps backend: no reference state");
  return std::norm(overlap(*reference_, evolve(theta)));
}

double MpsBackend::energy(const Eigen::VectorXd& theta, Eigen::VectorXd* grad) const {
  if (grad)
    *grad = central_difference([this](const Eigen::VectorXd& x) { return energy_value(x); },
                               theta, fd_step_);
  return energy_value(theta);
}

double MpsBackend::fidelity(const Eigen::VectorXd& theta, Eigen::VectorXd* grad) const {
  if (grad)
    *grad = central_difference([this](const Eigen::VectorXd& x) { return fidelity_value(x); },
                               theta, fd_step_);
  return fidelity_value(theta);
}

CircuitState MpsBackend::state(const Eigen::VectorXd& theta) const { return evolve(theta); }

template <class Scalar>
Eigen::VectorXcd sector_amplitudes(const MatrixProductState<Scalar>& psi, const FockBasis& basis) {
  using Row = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Stride = Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>;
  const int n = psi.num_qubits();
  if (n != basis.num_qubits()) throw DimensionError("sector_amplitudes: qubit count mismatch");
  const int target = basis.num_particles();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(basis.dimension());
  std::vector<Row> prefix(static_cast<std::size_t>(n) + 1);
  prefix[0] = Row::Ones(1);

  std::function<void(int, int, std::uint64_t)> visit = [&](int k, int count,
                                                           std::uint64_t pattern) {
    if (k == n) {
      out(basis.index(pattern)) = prefix[static_cast<std::size_t>(n)](0);
      return;
    }
    const auto& a = psi.site(k);
    const Eigen::Index l = a.dimension(0), r = a.dimension(2);
    for (int p = 0; p < 2; ++p) {
      const int next = count + p;
      if (next > target || target - next > n - k - 1) continue;
      const Eigen::Map<const Mat, 0, Stride> slice(a.data() + l * p, l, r, Stride(2 * l, 1));
      prefix[static_cast<std::size_t>(k) + 1].noalias() = prefix[static_cast<std::size_t>(k)] * slice;
      visit(k + 1, next, p ? pattern | (std::uint64_t{1} << k) : pattern);
    }
  };
  visit(0, 0, 0);
  return out;
}

template Eigen::VectorXcd sector_amplitudes<double>(const MatrixProductState<double>&,
                                                    const FockBasis&);
template Eigen::VectorXcd sector_amplitudes<cx>(const MatrixProductState<cx>&, const FockBasis&);

Eigen::VectorXcd apply_circuit_dense(const AnsatzSpec& ansatz, const Eigen::VectorXd& theta,
                                     Eigen::VectorXcd psi) {
  check_theta(ansatz, theta);
  if (psi.size() != (Eigen::Index{1} << ansatz.num_qubits))
    throw DimensionError("apply_circuit_dense: vector length does not match the register");
  for (const auto& g : ansatz.gates) {
    const std::uint64_t ma = std::uint64_t{1} << g.a;
    if (g.b < 0) {
      const Gate2 u = rz_matrix(theta(g.param));
      for (Eigen::Index i = 0; i < psi.size(); ++i)
        psi(i) *= (static_cast<std::uint64_t>(i) & ma) ? u(1, 1) : u(0, 0);
      continue;
    }
    const std::uint64_t mb = std::uint64_t{1} << g.b;
    const std::uint64_t between = between_mask(g.a, g.b);
    const Gate4 u = gate_matrix(g, theta);
    Eigen::VectorXcd next = Eigen::VectorXcd::Zero(psi.size());
    for (Eigen::Index col = 0; col < psi.size(); ++col) {
      const auto s = static_cast<std::uint64_t>(col);
      const int in = 2 * ((s & ma) ? 1 : 0) + ((s & mb) ? 1 : 0);
      const double sign = g.fermionic && std::popcount(s & between) % 2 ? -1.0 : 1.0;
      for (int out = 0; out < 4; ++out) {
        if (u(out, in) == cx(0.0)) continue;
        std::uint64_t t = s & ~(ma | mb);
        if (out & 2) t |= ma;
        if (out & 1) t |= mb;
        const double f = (out != in && (out == 1 || out == 2) && (in == 1 || in == 2)) ? sign : 1.0;
        next(static_cast<Eigen::Index>(t)) += f * u(out, in) * psi(col);
      }
    }
    psi = std::move(next);
  }
  return psi;
}

}  // namespace dfvqe
