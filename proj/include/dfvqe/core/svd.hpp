// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "dfvqe/core/error.hpp"

namespace dfvqe {

template <class Scalar>
struct ThinSvd {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> u;
  Eigen::VectorXd s;  // descending
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> v;
};

/// Thin SVD. Divide-and-conquer first; the factors are checked (reconstruction
/// and orthonormality) and recomputed with one-sided Jacobi when the check
/// fails, which Eigen 3.4.0's BDCSVD does on some rank-deficient inputs.
template <class Scalar>
ThinSvd<Scalar> thin_svd(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m,
                         double tolerance = 1e-10) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  ThinSvd<Scalar> out;
  const double scale = std::max(m.norm(), std::numeric_limits<double>::min());
  {
    Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() == Eigen::Success) {
      out.u = svd.matrixU();
      out.s = svd.singularValues();
      out.v = svd.matrixV();
      const Eigen::Index k = out.s.size();
      const double recon =
          (out.u * out.s.template cast<Scalar>().asDiagonal() * out.v.adjoint() - m).norm() / scale;
      const double ortho = std::max((out.u.adjoint() * out.u - Mat::Identity(k, k)).norm(),
                                    (out.v.adjoint() * out.v - Mat::Identity(k, k)).norm());
      if (recon < tolerance && ortho < tolerance * std::sqrt(static_cast<double>(k) + 1.0))
        return out;
    }
  }
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NumericalError("SVD failed to converge");
  out.u = svd.matrixU();
  out.s = svd.singularValues();
  out.v = svd.matrixV();
  return out;
}

}  // namespace dfvqe
