// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "dfvqe/ed/ed.hpp"
#include "dfvqe/encode/mpo.hpp"
#include "dfvqe/tensor/mps.hpp"
#include "dfvqe/vqe/ansatz.hpp"

namespace dfvqe {

enum class GradientMethod {
  automatic,           // adjoint where the backend supports it, else central differences
  adjoint,             // exact reverse-mode sweep (sector backend only)
  central_difference,  // (f(x+h) - f(x-h)) / 2h, h = step * max(1, |x|)
};

std::string to_string(GradientMethod method);
GradientMethod parse_gradient_method(std::string_view text);

using CircuitState = std::variant<SectorState, MatrixProductState<cx>>;

/// Evaluates a parameterised circuit applied to a fixed initial state.
/// Implementations are immutable after construction; calls are thread-safe.
class CircuitBackend {
 public:
  virtual ~CircuitBackend() = default;

  virtual std::string name() const = 0;
  virtual const AnsatzSpec& ansatz() const = 0;
  int num_parameters() const { return ansatz().num_parameters(); }

  /// <psi(theta)|H|psi(theta)>; fills `grad` when non-null.
  virtual double energy(const Eigen::VectorXd& theta, Eigen::VectorXd* grad = nullptr) const = 0;
  /// |<ref|psi(theta)>|^2; throws ValidationError without a reference.
  virtual double fidelity(const Eigen::VectorXd& theta,
                          Eigen::VectorXd* grad = nullptr) const = 0;
  virtual bool has_reference() const = 0;
  virtual CircuitState state(const Eigen::VectorXd& theta) const = 0;
};

/// Central-difference gradient of `f` at `theta`.
template <class F>
Eigen::VectorXd central_difference(F&& f, const Eigen::VectorXd& theta, double step) {
  Eigen::VectorXd grad(theta.size());
  Eigen::VectorXd x = theta;
  for (Eigen::Index p = 0; p < theta.size(); ++p) {
    const double h = step * std::max(1.0, std::abs(theta(p)));
    x(p) = theta(p) + h;
    const double up = f(x);
    x(p) = theta(p) - h;
    const double down = f(x);
    x(p) = theta(p);
    grad(p) = (up - down) / (2.0 * h);
  }
  return grad;
}

/// Exact state vector in one particle-number sector. Gates act through
/// precomputed partner tables, so memory grows with dimension x distinct pairs.
class SectorBackend final : public CircuitBackend {
 public:
  SectorBackend(AnsatzSpec ansatz, FockBasis basis, Eigen::SparseMatrix<double> hamiltonian,
                Eigen::VectorXcd initial, std::optional<Eigen::VectorXcd> reference = std::nullopt,
                GradientMethod method = GradientMethod::automatic, double fd_step = 1e-6);
  ~SectorBackend() override;

  std::string name() const override { return "sector"; }
  const AnsatzSpec& ansatz() const override { return ansatz_; }
  double energy(const Eigen::VectorXd& theta, Eigen::VectorXd* grad = nullptr) const override;
  double fidelity(const Eigen::VectorXd& theta, Eigen::VectorXd* grad = nullptr) const override;
  bool has_reference() const override { return reference_.has_value(); }
  CircuitState state(const Eigen::VectorXd& theta) const override;

  const FockBasis& basis() const noexcept { return basis_; }
  Eigen::VectorXcd evolve(const Eigen::VectorXd& theta) const;

 private:
  struct PairTable;

  const PairTable& table(int a, int b) const;
  void apply(const GateOp& g, const Eigen::VectorXd& theta, Eigen::VectorXcd& psi,
             bool adjoint) const;
  void apply_derivative(const GateOp& g, const Eigen::VectorXd& theta, int which,
                        const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;
  Eigen::VectorXcd apply_hamiltonian(const Eigen::VectorXcd& psi) const;
  /// Reverse sweep: d/dtheta 2 Re <lambda_k| dG_k psi_{k-1}>.
  Eigen::VectorXd adjoint_gradient(const Eigen::VectorXd& theta, Eigen::VectorXcd psi,
                                   Eigen::VectorXcd lambda) const;

  AnsatzSpec ansatz_;
  FockBasis basis_;
  Eigen::SparseMatrix<double> hamiltonian_;
  Eigen::VectorXcd initial_;
  std::optional<Eigen::VectorXcd> reference_;
  GradientMethod method_;
  double fd_step_;
  std::vector<std::unique_ptr<PairTable>> tables_;
  std::vector<int> table_of_gate_;
};

/// Circuit applied to a truncated MPS, gradients by central differences.
class MpsBackend final : public CircuitBackend {
 public:
  MpsBackend(AnsatzSpec ansatz, MatrixProductOperator<cx> hamiltonian,
             MatrixProductState<cx> initial, TruncationPolicy policy,
             std::optional<MatrixProductState<cx>> reference = std::nullopt,
             double fd_step = 1e-6);

  std::string name() const override { return "mps"; }
  const AnsatzSpec& ansatz() const override { return ansatz_; }
  double energy(const Eigen::VectorXd& theta, Eigen::VectorXd* grad = nullptr) const override;
  double fidelity(const Eigen::VectorXd& theta, Eigen::VectorXd* grad = nullptr) const override;
  bool has_reference() const override { return reference_.has_value(); }
  CircuitState state(const Eigen::VectorXd& theta) const override;

  MatrixProductState<cx> evolve(const Eigen::VectorXd& theta) const;

 private:
  double energy_value(const Eigen::VectorXd& theta) const;
  double fidelity_value(const Eigen::VectorXd& theta) const;

  AnsatzSpec ansatz_;
  MatrixProductOperator<cx> hamiltonian_;
  MatrixProductState<cx> initial_;
  TruncationPolicy policy_;
  std::optional<MatrixProductState<cx>> reference_;
  double fd_step_;
};

/// Amplitudes of `psi` on the patterns of `basis`, contracted depth-first
/// so prefixes that cannot reach the sector are never visited.
template <class Scalar>
Eigen::VectorXcd sector_amplitudes(const MatrixProductState<Scalar>& psi, const FockBasis& basis);

/// Applies the circuit to a dense 2^n vector. Reference implementation for tests.
Eigen::VectorXcd apply_circuit_dense(const AnsatzSpec& ansatz, const Eigen::VectorXd& theta,
                                     Eigen::VectorXcd psi);

}  // namespace dfvqe
