// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "dfvqe/core/error.hpp"

namespace dfvqe {

struct LanczosOptions {
  int max_krylov = 64;
  int max_restarts = 40;
  /// Converged when ||H v - theta v|| < tolerance * max(1, |theta|).
  double tolerance = 1e-12;
};

template <class Scalar>
struct LanczosResult {
  double eigenvalue = 0.0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> vector;
  double residual = 0.0;
  int matvecs = 0;
  bool converged = false;
};

/// Lowest eigenpair of a hermitian operator given as `apply(in, out)`.
/// Full reorthogonalisation; thick restart from the current Ritz vector.
template <class Scalar, class Apply>
LanczosResult<Scalar> lanczos_ground_state(Apply&& apply,
                                           Eigen::Matrix<Scalar, Eigen::Dynamic, 1> start,
                                           const LanczosOptions& options = {}) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index dim = start.size();
  LanczosResult<Scalar> result;
  if (dim == 0) throw DimensionError("lanczos: empty space");
  double nrm = start.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) {
    start = Vec::Ones(dim);
    nrm = start.norm();
  }
  start /= nrm;

  const int kmax = static_cast<int>(std::min<Eigen::Index>(options.max_krylov, dim));
  Vec w(dim);
  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    Mat basis(dim, kmax);
    std::vector<double> alpha, beta;
    basis.col(0) = start;
    Eigen::VectorXd ritz;
    double theta = 0.0;
    int used = 0;
    bool invariant = false;
    for (int j = 0; j < kmax; ++j) {
      apply(basis.col(j), w);
      ++result.matvecs;
      const double a = std::real(basis.col(j).dot(w));
      alpha.push_back(a);
      // Two passes of classical Gram-Schmidt keep the basis orthonormal.
      for (int pass = 0; pass < 2; ++pass) {
        const Vec proj = basis.leftCols(j + 1).adjoint() * w;
        w.noalias() -= basis.leftCols(j + 1) * proj;
      }
      const double b = w.norm();
      used = j + 1;

      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(used, used);
      for (int i = 0; i < used; ++i) {
        t(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < used) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
      theta = es.eigenvalues()(0);
      ritz = es.eigenvectors().col(0);
      result.residual = std::abs(b * ritz(used - 1));
      if (result.residual < options.tolerance * std::max(1.0, std::abs(theta)) || b < 1e-14 ||
          j + 1 == kmax) {
        invariant = b < 1e-14 || used == dim;
        break;
      }
      beta.push_back(b);
      basis.col(j + 1) = w / b;
    }
    Vec v = basis.leftCols(used) * ritz.template cast<Scalar>();
    v.normalize();
    result.eigenvalue = theta;
    result.vector = v;
    if (result.residual < options.tolerance * std::max(1.0, std::abs(theta)) || invariant) {
      // Recompute the residual explicitly so callers see the true value.
      apply(v, w);
      ++result.matvecs;
      result.eigenvalue = std::real(v.dot(w));
      result.residual = (w - result.eigenvalue * v).norm();
      result.converged = true;
      return result;
    }
    start = v;
  }
  return result;
}

}  // namespace dfvqe
