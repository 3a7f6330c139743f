// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>

#include <unsupported/Eigen/CXX11/Tensor>

namespace dfvqe::detail {

using Pair = Eigen::IndexPair<Eigen::Index>;

/// Left environment step. L(bra, mpo, ket) over the bond left of the site
/// becomes L'(bra', mpo', ket') over the bond to its right.
template <class S>
Eigen::Tensor<S, 3> extend_left(const Eigen::Tensor<S, 3>& env, const Eigen::Tensor<S, 3>& a,
                                const Eigen::Tensor<S, 4>& w) {
  const std::array<Pair, 1> c1{Pair(2, 0)};
  const Eigen::Tensor<S, 4> t1 = env.contract(a, c1);  // (b, w, i, k')
  const std::array<Pair, 2> c2{Pair(1, 0), Pair(2, 3)};
  const Eigen::Tensor<S, 4> t2 = t1.contract(w, c2);  // (b, k', w', o)
  const std::array<Pair, 2> c3{Pair(0, 0), Pair(3, 1)};
  const Eigen::Tensor<S, 3> t3 = t2.contract(a.conjugate(), c3);  // (k', w', b')
  return t3.shuffle(std::array<int, 3>{2, 1, 0});
}

/// Right environment step: R(bra, mpo, ket) over the bond right of the site
/// becomes the environment over the bond to its left.
template <class S>
Eigen::Tensor<S, 3> extend_right(const Eigen::Tensor<S, 3>& env, const Eigen::Tensor<S, 3>& a,
                                 const Eigen::Tensor<S, 4>& w) {
  const std::array<Pair, 1> c1{Pair(2, 2)};
  const Eigen::Tensor<S, 4> t1 = a.contract(env, c1);  // (k, i, b', w')
  const std::array<Pair, 2> c2{Pair(1, 3), Pair(3, 1)};
  const Eigen::Tensor<S, 4> t2 = t1.contract(w, c2);  // (k, b', w, o)
  const std::array<Pair, 2> c3{Pair(1, 2), Pair(3, 1)};
  const Eigen::Tensor<S, 3> t3 = t2.contract(a.conjugate(), c3);  // (k, w, b)
  return t3.shuffle(std::array<int, 3>{2, 1, 0});
}

template <class S>
Eigen::Tensor<S, 3> trivial_environment() {
  Eigen::Tensor<S, 3> e(1, 1, 1);
  e.setConstant(S(1));
  return e;
}

}  // namespace dfvqe::detail
