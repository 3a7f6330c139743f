// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/CXX11/Tensor>

#include "dfvqe/encode/pauli.hpp"

namespace dfvqe {

/// Tensor-train operator. Site k is a rank-4 tensor W(left, right, out, in);
/// boundary bonds have dimension 1.
template <class Scalar>
class MatrixProductOperator {
 public:
  using Site = Eigen::Tensor<Scalar, 4>;

  MatrixProductOperator() = default;
  explicit MatrixProductOperator(std::vector<Site> sites);

  int num_qubits() const noexcept { return static_cast<int>(sites_.size()); }
  const Site& site(int k) const { return sites_[static_cast<std::size_t>(k)]; }
  Site& site(int k) { return sites_[static_cast<std::size_t>(k)]; }

  /// Bond dimensions 0..n (first and last are 1).
  std::vector<int> bond_dims() const;
  int max_bond_dim() const;

  template <class Other>
  MatrixProductOperator<Other> cast() const {
    std::vector<typename MatrixProductOperator<Other>::Site> out;
    out.reserve(sites_.size());
    for (const auto& w : sites_) out.push_back(w.template cast<Other>());
    return MatrixProductOperator<Other>(std::move(out));
  }

 private:
  std::vector<Site> sites_;
};

/// Finite-state-machine construction followed by SVD compression: singular
/// values below `cutoff` times the largest one on each bond are discarded.
///
/// For real `Scalar`, Y is stored as the real matrix XZ and the coefficient
/// absorbs i^{#Y}; strings with an odd number of Y raise NumericalError.
template <class Scalar>
MatrixProductOperator<Scalar> assemble_mpo(const PauliTermSum& sum, double cutoff = 1e-12);

/// Left QR sweep, then right-to-left truncated SVD sweep.
template <class Scalar>
void compress(MatrixProductOperator<Scalar>& mpo, double cutoff = 1e-12);

/// a + b by direct sum of bonds, then compression.
template <class Scalar>
MatrixProductOperator<Scalar> mpo_sum(const MatrixProductOperator<Scalar>& a,
                                      const MatrixProductOperator<Scalar>& b,
                                      double cutoff = 1e-12);

/// Dense 2^n x 2^n matrix (qubit 0 least significant); limited to 14 qubits.
template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense_matrix(
    const MatrixProductOperator<Scalar>& mpo);

}  // namespace dfvqe
