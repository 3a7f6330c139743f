// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfvqe/encode/mpo.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <type_traits>

#include <fmt/format.h>

#include "dfvqe/core/error.hpp"
#include "dfvqe/core/svd.hpp"

namespace dfvqe {

namespace {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <class S>
constexpr bool is_complex_v = !std::is_same_v<S, double>;

enum LocalOp : int { op_i = 0, op_x = 1, op_y = 2, op_z = 3 };

int op_code(const PauliString& p, int q) {
  switch (p.at(q)) {
    case 'X': return op_x;
    case 'Y': return op_y;
    case 'Z': return op_z;
    default: return op_i;
  }
}

template <class S>
Eigen::Matrix<S, 2, 2> local_matrix(int code) {
  Eigen::Matrix<S, 2, 2> m;
  switch (code) {
    case op_x: m << S(0), S(1), S(1), S(0); break;
    case op_z: m << S(1), S(0), S(0), S(-1); break;
    case op_y:
      if constexpr (is_complex_v<S>)
        m << S(0), S(0, -1), S(0, 1), S(0);
      else
        m << 0.0, -1.0, 1.0, 0.0;  // XZ; the missing i lives in the coefficient
      break;
    default: m.setIdentity();
  }
  return m;
}

template <class S>
S term_coefficient(const PauliTerm& t, int num_qubits) {
  if constexpr (is_complex_v<S>) {
    return S(t.coefficient);
  } else {
    const int ny = t.string.num_y();
    if (ny % 2 != 0)
      throw NumericalError(fmt::format("real MPO cannot represent {} (odd number of Y)",
                                       to_string(t.string, num_qubits)));
    return ny % 4 == 0 ? t.coefficient : -t.coefficient;
  }
}

// Rows (l, out, in) -> l + L * (out + 2 * in); columns r.
template <class S>
Mat<S> left_matrix(const Eigen::Tensor<S, 4>& w) {
  const Eigen::Index L = w.dimension(0), R = w.dimension(1);
  Mat<S> m(L * 4, R);
  for (Eigen::Index i = 0; i < 2; ++i)
    for (Eigen::Index o = 0; o < 2; ++o)
      for (Eigen::Index r = 0; r < R; ++r)
        for (Eigen::Index l = 0; l < L; ++l) m(l + L * (o + 2 * i), r) = w(l, r, o, i);
  return m;
}

template <class S>
Eigen::Tensor<S, 4> from_left_matrix(const Mat<S>& m, Eigen::Index L) {
  const Eigen::Index R = m.cols();
  Eigen::Tensor<S, 4> w(L, R, 2, 2);
  for (Eigen::Index i = 0; i < 2; ++i)
    for (Eigen::Index o = 0; o < 2; ++o)
      for (Eigen::Index r = 0; r < R; ++r)
        for (Eigen::Index l = 0; l < L; ++l) w(l, r, o, i) = m(l + L * (o + 2 * i), r);
  return w;
}

// Column-major storage already is L x (R * 4).
template <class S>
Mat<S> right_matrix(const Eigen::Tensor<S, 4>& w) {
  return Eigen::Map<const Mat<S>>(w.data(), w.dimension(0), w.size() / w.dimension(0));
}

template <class S>
Eigen::Tensor<S, 4> from_right_matrix(const Mat<S>& m) {
  const Eigen::Index R = m.cols() / 4;
  Eigen::Tensor<S, 4> w(m.rows(), R, 2, 2);
  std::copy(m.data(), m.data() + m.size(), w.data());
  return w;
}

}  // namespace

template <class Scalar>
MatrixProductOperator<Scalar>::MatrixProductOperator(std::vector<Site> sites)
    : sites_(std::move(sites)) {
  for (std::size_t k = 0; k < sites_.size(); ++k) {
    const auto& w = sites_[k];
    if (w.dimension(2) != 2 || w.dimension(3) != 2)
      throw DimensionError(fmt::format("MPO site {} has physical dimensions {}x{}", k,
                                       w.dimension(2), w.dimension(3)));
    if (k > 0 && sites_[k - 1].dimension(1) != w.dimension(0))
      throw DimensionError(fmt::format("MPO bond {} mismatch: {} vs {}", k,
                                       sites_[k - 1].dimension(1), w.dimension(0)));
  }
  if (!sites_.empty() && (sites_.front().dimension(0) != 1 || sites_.back().dimension(1) != 1))
    throw DimensionError("MPO boundary bonds must have dimension 1");
}

template <class Scalar>
std::vector<int> MatrixProductOperator<Scalar>::bond_dims() const {
  std::vector<int> out;
  if (sites_.empty()) return out;
  out.push_back(static_cast<int>(sites_.front().dimension(0)));
  for (const auto& w : sites_) out.push_back(static_cast<int>(w.dimension(1)));
  return out;
}

template <class Scalar>
int MatrixProductOperator<Scalar>::max_bond_dim() const {
  const auto dims = bond_dims();
  return dims.empty() ? 0 : *std::max_element(dims.begin(), dims.end());
}

template <class Scalar>
MatrixProductOperator<Scalar> assemble_mpo(const PauliTermSum& sum, double cutoff) {
  const int n = sum.num_qubits;
  if (n < 1) throw DimensionError("assemble_mpo: operator acts on no qubits");

  // Bond k sits left of site k. Bond 0 holds only the vacuum (nothing placed
  // yet), bond n only the completed state; internal bonds hold vacuum = 0,
  // completed = 1 and one state per distinct unfinished operator prefix.
  std::vector<int> dims(static_cast<std::size_t>(n + 1), 2);
  dims.front() = 1;
  dims.back() = 1;
  auto vacuum = [](int /*bond*/) { return 0; };
  auto done = [n](int bond) { return bond == n ? 0 : 1; };

  using Key = std::tuple<int, int, int>;  // (left state, right state, op)
  std::vector<std::map<Key, Scalar>> transitions(static_cast<std::size_t>(n));
  std::vector<std::map<std::pair<int, int>, int>> children(static_cast<std::size_t>(n));

  for (int k = 0; k < n; ++k) {
    if (k + 1 < n) transitions[k][{vacuum(k), vacuum(k + 1), op_i}] += Scalar(1);
    if (k > 0) transitions[k][{done(k), done(k + 1), op_i}] += Scalar(1);
  }

  for (const auto& t : sum.terms) {
    if (((t.string.x | t.string.z) >> std::min(n, 63)) != 0 && n < 64)
      throw DimensionError(fmt::format("Pauli string acts outside {} qubits", n));
    const Scalar c = term_coefficient<Scalar>(t, n);
    if (t.string.is_identity()) {
      transitions[0][{vacuum(0), done(1), op_i}] += c;
      continue;
    }
    const int first = t.string.lowest();
    const int last = t.string.highest();
    int state = vacuum(first);
    for (int k = first; k < last; ++k) {
      const int op = op_code(t.string, k);
      auto& kids = children[static_cast<std::size_t>(k)];
      auto it = kids.find({state, op});
      if (it == kids.end()) {
        const int fresh = dims[static_cast<std::size_t>(k + 1)]++;
        it = kids.emplace(std::make_pair(state, op), fresh).first;
        transitions[k][{state, fresh, op}] += Scalar(1);
      }
      state = it->second;
    }
    transitions[last][{state, done(last + 1), op_code(t.string, last)}] += c;
  }

  std::vector<Eigen::Tensor<Scalar, 4>> sites;
  sites.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    Eigen::Tensor<Scalar, 4> w(dims[k], dims[k + 1], 2, 2);
    w.setZero();
    for (const auto& [key, coeff] : transitions[k]) {
      const auto [l, r, op] = key;
      const auto m = local_matrix<Scalar>(op);
      for (int o = 0; o < 2; ++o)
        for (int i = 0; i < 2; ++i) w(l, r, o, i) += coeff * m(o, i);
    }
    sites.push_back(std::move(w));
  }
  MatrixProductOperator<Scalar> mpo(std::move(sites));
  compress(mpo, cutoff);
  return mpo;
}

template <class Scalar>
void compress(MatrixProductOperator<Scalar>& mpo, double cutoff) {
  const int n = mpo.num_qubits();
  for (int k = 0; k + 1 < n; ++k) {
    const Mat<Scalar> m = left_matrix(mpo.site(k));
    const Eigen::Index keep = std::min(m.rows(), m.cols());
    Eigen::HouseholderQR<Mat<Scalar>> qr(m);
    const Mat<Scalar> q = qr.householderQ() * Mat<Scalar>::Identity(m.rows(), keep);
    const Mat<Scalar> r = qr.matrixQR().topRows(keep).template triangularView<Eigen::Upper>();
    mpo.site(k) = from_left_matrix<Scalar>(q, mpo.site(k).dimension(0));
    mpo.site(k + 1) = from_right_matrix<Scalar>(r * right_matrix(mpo.site(k + 1)));
  }
  for (int k = n - 1; k > 0; --k) {
    const Mat<Scalar> m = right_matrix(mpo.site(k));
    const auto svd = thin_svd<Scalar>(m);
    const auto& s = svd.s;
    Eigen::Index keep = 1;
    while (keep < s.size() && s(keep) > cutoff * s(0)) ++keep;
    mpo.site(k) = from_right_matrix<Scalar>(svd.v.leftCols(keep).adjoint());
    const Mat<Scalar> us =
        svd.u.leftCols(keep) * s.head(keep).template cast<Scalar>().asDiagonal();
    const auto prev_left = mpo.site(k - 1).dimension(0);
    mpo.site(k - 1) = from_left_matrix<Scalar>(left_matrix(mpo.site(k - 1)) * us, prev_left);
  }
}

template <class Scalar>
MatrixProductOperator<Scalar> mpo_sum(const MatrixProductOperator<Scalar>& a,
                                      const MatrixProductOperator<Scalar>& b, double cutoff) {
  const int n = a.num_qubits();
  if (b.num_qubits() != n)
    throw DimensionError(fmt::format("mpo_sum: {} vs {} qubits", n, b.num_qubits()));
  if (n == 0) return a;
  std::vector<Eigen::Tensor<Scalar, 4>> sites;
  for (int k = 0; k < n; ++k) {
    const auto& wa = a.site(k);
    const auto& wb = b.site(k);
    const bool first = k == 0;
    const bool last = k == n - 1;
    const Eigen::Index L = first ? 1 : wa.dimension(0) + wb.dimension(0);
    const Eigen::Index R = last ? 1 : wa.dimension(1) + wb.dimension(1);
    Eigen::Tensor<Scalar, 4> w(L, R, 2, 2);
    w.setZero();
    const Eigen::Index lb = first ? 0 : wa.dimension(0);
    const Eigen::Index rb = last ? 0 : wa.dimension(1);
    for (Eigen::Index i = 0; i < 2; ++i)
      for (Eigen::Index o = 0; o < 2; ++o) {
        for (Eigen::Index r = 0; r < wa.dimension(1); ++r)
          for (Eigen::Index l = 0; l < wa.dimension(0); ++l) w(l, r, o, i) += wa(l, r, o, i);
        for (Eigen::Index r = 0; r < wb.dimension(1); ++r)
          for (Eigen::Index l = 0; l < wb.dimension(0); ++l)
            w(lb + l, rb + r, o, i) += wb(l, r, o, i);
      }
    sites.push_back(std::move(w));
  }
  MatrixProductOperator<Scalar> out(std::move(sites));
  compress(out, cutoff);
  return out;
}

template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense_matrix(
    const MatrixProductOperator<Scalar>& mpo) {
  const int n = mpo.num_qubits();
  if (n > 14) throw DimensionError(fmt::format("dense expansion limited to 14 qubits (got {})", n));
  std::vector<Mat<Scalar>> blocks(1, Mat<Scalar>::Ones(1, 1));
  for (int k = 0; k < n; ++k) {
    const auto& w = mpo.site(k);
    const Eigen::Index dim = blocks.front().rows();
    std::vector<Mat<Scalar>> next(static_cast<std::size_t>(w.dimension(1)),
                                  Mat<Scalar>::Zero(2 * dim, 2 * dim));
    for (Eigen::Index r = 0; r < w.dimension(1); ++r)
      for (Eigen::Index l = 0; l < w.dimension(0); ++l)
        for (Eigen::Index o = 0; o < 2; ++o)
          for (Eigen::Index i = 0; i < 2; ++i) {
            const Scalar c = w(l, r, o, i);
            if (c == Scalar(0)) continue;
            next[r].block(o * dim, i * dim, dim, dim) += c * blocks[l];
          }
    blocks = std::move(next);
  }
  return blocks.front();
}

template class MatrixProductOperator<double>;
template class MatrixProductOperator<cx>;
template MatrixProductOperator<double> assemble_mpo<double>(const PauliTermSum&, double);
template MatrixProductOperator<cx> assemble_mpo<cx>(const PauliTermSum&, double);
template void compress<double>(MatrixProductOperator<double>&, double);
template void compress<cx>(MatrixProductOperator<cx>&, double);
template MatrixProductOperator<double> mpo_sum<double>(const MatrixProductOperator<double>&,
                                                       const MatrixProductOperator<double>&,
                                                       double);
template MatrixProductOperator<cx> mpo_sum<cx>(const MatrixProductOperator<cx>&,
                                               const MatrixProductOperator<cx>&, double);
template Mat<double> dense_matrix<double>(const MatrixProductOperator<double>&);
template Mat<cx> dense_matrix<cx>(const MatrixProductOperator<cx>&);

}  // namespace dfvqe
