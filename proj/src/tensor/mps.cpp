// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfvqe/tensor/mps.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <type_traits>

#include <fmt/format.h>

#include "dfvqe/core/error.hpp"
#include "dfvqe/core/svd.hpp"
#include "dfvqe/tensor/contract.hpp"

namespace dfvqe {

int max_chi_default(int num_qubits) {
  if (num_qubits < 0) throw DimensionError("max_chi_default: negative qubit count");
  const int half = num_qubits / 2;
  return half >= 30 ? 1 << 30 : 1 << half;
}

namespace {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

// (L*2) x R view: row l + L*p.
template <class S>
Eigen::Map<const Mat<S>> left_view(const Eigen::Tensor<S, 3>& a) {
  return {a.data(), a.dimension(0) * a.dimension(1), a.dimension(2)};
}

// L x (2*R) view: column p + 2*r.
template <class S>
Eigen::Map<const Mat<S>> right_view(const Eigen::Tensor<S, 3>& a) {
  return {a.data(), a.dimension(0), a.dimension(1) * a.dimension(2)};
}

template <class S>
Eigen::Tensor<S, 3> site_from(const Mat<S>& m, Eigen::Index left, Eigen::Index right) {
  Eigen::Tensor<S, 3> a(left, 2, right);
  std::copy(m.data(), m.data() + m.size(), a.data());
  return a;
}

template <class S>
Mat<S> thin_q(const Mat<S>& m, Mat<S>& r) {
  const Eigen::Index k = std::min(m.rows(), m.cols());
  Eigen::HouseholderQR<Mat<S>> qr(m);
  r = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
  return qr.householderQ() * Mat<S>::Identity(m.rows(), k);
}

template <class S>
Eigen::Matrix<S, 4, 4> swap_gate(bool fermionic) {
  Eigen::Matrix<S, 4, 4> g = Eigen::Matrix<S, 4, 4>::Zero();
  g(0, 0) = S(1);
  g(1, 2) = S(1);
  g(2, 1) = S(1);
  g(3, 3) = fermionic ? S(-1) : S(1);
  return g;
}

template <class S>
constexpr std::uint32_t scalar_kind() {
  return std::is_same_v<S, double> ? 0U : 1U;
}

}  // namespace

template <class Scalar>
MatrixProductState<Scalar>::MatrixProductState(std::vector<Site> sites, TruncationPolicy policy,
                                               int center)
    : sites_(std::move(sites)), policy_(policy), center_(center) {
  const int n = num_qubits();
  if (n == 0) throw DimensionError("MPS needs at least one site");
  for (int k = 0; k < n; ++k) {
    const auto& a = sites_[static_cast<std::size_t>(k)];
    if (a.dimension(1) != 2)
      throw DimensionError(fmt::format("MPS site {} has physical dimension {}", k, a.dimension(1)));
    if (k > 0 && sites_[static_cast<std::size_t>(k - 1)].dimension(2) != a.dimension(0))
      throw DimensionError(fmt::format("MPS bond {} mismatch", k));
  }
  if (sites_.front().dimension(0) != 1 || sites_.back().dimension(2) != 1)
    throw DimensionError("MPS boundary bonds must have dimension 1");
  if (center_ >= n) throw DimensionError("MPS center out of range");
  if (policy_.chi_max < 1) throw ValidationError("chi_max must be >= 1");
}

template <class Scalar>
MatrixProductState<Scalar> MatrixProductState<Scalar>::product_state(const std::vector<int>& bits,
                                                                     TruncationPolicy policy) {
  std::vector<Site> sites;
  sites.reserve(bits.size());
  for (int b : bits) {
    if (b != 0 && b != 1) throw ValidationError("product_state: bits must be 0 or 1");
    Site a(1, 2, 1);
    a.setZero();
    a(0, b, 0) = Scalar(1);
    sites.push_back(std::move(a));
  }
  return MatrixProductState(std::move(sites), policy, 0);
}

template <class Scalar>
MatrixProductState<Scalar> MatrixProductState<Scalar>::from_dense(const Vector& psi, int n,
                                                                  TruncationPolicy policy) {
  if (n < 1 || n > 30 || psi.size() != (Eigen::Index{1} << n))
    throw DimensionError(fmt::format("from_dense: vector of length {} for {} qubits", psi.size(), n));
  // Qubit 0 is the least significant bit, so the row-major split peels it first.
  std::vector<Site> sites;
  Mat<Scalar> rest = Eigen::Map<const Mat<Scalar>>(psi.data(), 1, psi.size());
  Eigen::Index left = 1;
  for (int k = 0; k < n - 1; ++k) {
    // rest: left x (2 * remaining), column index p_k + 2 * (higher bits).
    const Eigen::Index remaining = rest.cols() / 2;
    Mat<Scalar> m(left * 2, remaining);
    for (Eigen::Index c = 0; c < remaining; ++c)
      for (Eigen::Index p = 0; p < 2; ++p) m.col(c).segment(p * left, left) = rest.col(p + 2 * c);
    Mat<Scalar> r;
    const Mat<Scalar> q = thin_q(m, r);
    sites.push_back(site_from<Scalar>(q, left, q.cols()));
    left = q.cols();
    rest = r;
  }
  sites.push_back(site_from<Scalar>(rest, left, 1));
  MatrixProductState out(std::move(sites), policy, n - 1);
  // Truncate right to left according to the policy.
  for (int k = n - 2; k >= 0; --k) out.split_two_site(k, out.two_site_theta(k), false);
  return out;
}

template <class Scalar>
typename MatrixProductState<Scalar>::Vector MatrixProductState<Scalar>::to_dense() const {
  const int n = num_qubits();
  if (n > 26) throw DimensionError(fmt::format("to_dense limited to 26 qubits (got {})", n));
  Mat<Scalar> psi = Mat<Scalar>::Ones(1, 1);
  for (int k = 0; k < n; ++k) {
    const auto& a = site(k);
    const Eigen::Index m = a.dimension(0);
    const auto view = left_view(a);
    Mat<Scalar> next(psi.rows() * 2, a.dimension(2));
    for (Eigen::Index p = 0; p < 2; ++p)
      next.middleRows(p * psi.rows(), psi.rows()).noalias() = psi * view.middleRows(p * m, m);
    psi = std::move(next);
  }
  return psi.col(0);
}

template <class Scalar>
typename MatrixProductState<Scalar>::Site& MatrixProductState<Scalar>::mutable_site(int k) {
  center_ = -1;
  return sites_.at(static_cast<std::size_t>(k));
}

template <class Scalar>
void MatrixProductState<Scalar>::assign_site(int k, Site tensor, int center) {
  sites_.at(static_cast<std::size_t>(k)) = std::move(tensor);
  center_ = center;
}

template <class Scalar>
std::vector<int> MatrixProductState<Scalar>::bond_dims() const {
  std::vector<int> out;
  out.push_back(static_cast<int>(sites_.front().dimension(0)));
  for (const auto& a : sites_) out.push_back(static_cast<int>(a.dimension(2)));
  return out;
}

template <class Scalar>
int MatrixProductState<Scalar>::max_bond_dim() const {
  const auto d = bond_dims();
  return *std::max_element(d.begin(), d.end());
}

template <class Scalar>
void MatrixProductState<Scalar>::shift_center_right(int k) {
  auto& a = sites_[static_cast<std::size_t>(k)];
  auto& b = sites_[static_cast<std::size_t>(k + 1)];
  Mat<Scalar> r;
  const Mat<Scalar> q = thin_q<Scalar>(left_view(a), r);
  const Eigen::Index left = a.dimension(0);
  const Mat<Scalar> nb = r * right_view(b);
  const Eigen::Index right = b.dimension(2);
  a = site_from<Scalar>(q, left, q.cols());
  b = site_from<Scalar>(nb, nb.rows(), right);
}

template <class Scalar>
void MatrixProductState<Scalar>::shift_center_left(int k) {
  auto& a = sites_[static_cast<std::size_t>(k - 1)];
  auto& b = sites_[static_cast<std::size_t>(k)];
  Mat<Scalar> r;
  const Mat<Scalar> q = thin_q<Scalar>(right_view(b).adjoint(), r);  // B^dag = Q R
  const Eigen::Index right = b.dimension(2);
  const Mat<Scalar> qa = q.adjoint();
  const Mat<Scalar> na = left_view(a) * r.adjoint();
  const Eigen::Index left = a.dimension(0);
  b = site_from<Scalar>(qa, qa.rows(), right);
  a = site_from<Scalar>(na, left, na.cols());
}

template <class Scalar>
void MatrixProductState<Scalar>::move_center(int k) {
  const int n = num_qubits();
  if (k < 0 || k >= n) throw DimensionError(fmt::format("move_center: site {} out of range", k));
  if (center_ < 0) {
    for (int j = 0; j < k; ++j) shift_center_right(j);
    for (int j = n - 1; j > k; --j) shift_center_left(j);
  } else {
    for (int j = center_; j < k; ++j) shift_center_right(j);
    for (int j = center_; j > k; --j) shift_center_left(j);
  }
  center_ = k;
}

template <class Scalar>
double MatrixProductState<Scalar>::norm() const {
  if (center_ >= 0) {
    const auto& a = sites_[static_cast<std::size_t>(center_)];
    return Eigen::Map<const Mat<Scalar>>(a.data(), a.size(), 1).norm();
  }
  return std::sqrt(std::abs(overlap(*this, *this)));
}

template <class Scalar>
void MatrixProductState<Scalar>::normalize() {
  if (center_ < 0) move_center(0);
  auto& a = sites_[static_cast<std::size_t>(center_)];
  const double nrm = norm();
  if (!(nrm > 0.0)) throw NumericalError("normalize: zero state");
  a = a * Scalar(1.0 / nrm);
}

template <class Scalar>
void MatrixProductState<Scalar>::apply_single(int q, const Gate1& u) {
  if (q < 0 || q >= num_qubits()) throw DimensionError(fmt::format("qubit {} out of range", q));
  auto& a = sites_[static_cast<std::size_t>(q)];
  Site out(a.dimensions());
  for (Eigen::Index r = 0; r < a.dimension(2); ++r)
    for (Eigen::Index o = 0; o < 2; ++o)
      for (Eigen::Index l = 0; l < a.dimension(0); ++l)
        out(l, o, r) = u(o, 0) * a(l, 0, r) + u(o, 1) * a(l, 1, r);
  a = std::move(out);
  // Single-qubit unitaries preserve the canonical form.
}

template <class Scalar>
typename MatrixProductState<Scalar>::Matrix MatrixProductState<Scalar>::two_site_theta(
    int k) const {
  return left_view(site(k)) * right_view(site(k + 1));
}

template <class Scalar>
TruncationStats MatrixProductState<Scalar>::truncate_split(int k, const Matrix& theta,
                                                           bool center_right) {
  auto& a = sites_[static_cast<std::size_t>(k)];
  auto& b = sites_[static_cast<std::size_t>(k + 1)];
  const Eigen::Index left = a.dimension(0);
  const Eigen::Index right = b.dimension(2);
  if (theta.rows() != 2 * left || theta.cols() != 2 * right)
    throw DimensionError("split_two_site: theta has the wrong shape");
  const auto svd = thin_svd<Scalar>(theta);
  const auto& s = svd.s;
  const double total = s.squaredNorm();
  Eigen::Index keep = 0;
  const Eigen::Index cap = std::min<Eigen::Index>(s.size(), policy_.chi_max);
  while (keep < cap && (total == 0.0 ? keep == 0 : s(keep) * s(keep) >= policy_.cutoff * total))
    ++keep;
  keep = std::max<Eigen::Index>(keep, 1);
  TruncationStats stats;
  stats.kept = static_cast<int>(keep);
  stats.discarded = s.tail(s.size() - keep).squaredNorm();
  discarded_ += stats.discarded;

  const auto sv = s.head(keep).template cast<Scalar>().asDiagonal();
  Mat<Scalar> u = svd.u.leftCols(keep);
  Mat<Scalar> vh = svd.v.leftCols(keep).adjoint();
  if (center_right)
    vh = sv * vh;
  else
    u = u * sv;
  a = site_from<Scalar>(u, left, keep);
  b = site_from<Scalar>(vh, keep, right);
  center_ = center_right ? k + 1 : k;
  return stats;
}

template <class Scalar>
TruncationStats MatrixProductState<Scalar>::split_two_site(int k, const Matrix& theta,
                                                           bool center_right) {
  if (k < 0 || k + 1 >= num_qubits()) throw DimensionError("split_two_site: bad site");
  return truncate_split(k, theta, center_right);
}

template <class Scalar>
TruncationStats MatrixProductState<Scalar>::apply_two_site(int k, const Gate& g) {
  if (k < 0 || k + 1 >= num_qubits())
    throw DimensionError(fmt::format("apply_two_site: sites ({}, {}) out of range", k, k + 1));
  const bool center_right = center_ == k + 1;
  if (center_ != k && center_ != k + 1) move_center(k);
  const Mat<Scalar> theta = two_site_theta(k);
  const Eigen::Index left = site(k).dimension(0);
  const Eigen::Index right = site(k + 1).dimension(2);
  Mat<Scalar> out(theta.rows(), theta.cols());
  for (Eigen::Index r = 0; r < right; ++r)
    for (int p1 = 0; p1 < 2; ++p1)
      for (int p2 = 0; p2 < 2; ++p2) {
        auto dst = out.col(p2 + 2 * r).segment(p1 * left, left);
        dst.setZero();
        const int row = 2 * p1 + p2;
        for (int q1 = 0; q1 < 2; ++q1)
          for (int q2 = 0; q2 < 2; ++q2) {
            const Scalar c = g(row, 2 * q1 + q2);
            if (c != Scalar(0)) dst += c * theta.col(q2 + 2 * r).segment(q1 * left, left);
          }
      }
  return truncate_split(k, out, center_right);
}

template <class Scalar>
void MatrixProductState<Scalar>::swap_sites(int k, bool fermionic) {
  apply_two_site(k, swap_gate<Scalar>(fermionic));
  ++swaps_;
}

template <class Scalar>
void MatrixProductState<Scalar>::apply_gate(int a, int b, const Gate& g, bool fermionic) {
  const int n = num_qubits();
  if (a < 0 || b < 0 || a >= n || b >= n || a == b)
    throw DimensionError(fmt::format("apply_gate: invalid qubit pair ({}, {})", a, b));
  const Gate sw = swap_gate<Scalar>(false);
  const Gate oriented = a < b ? g : Gate(sw * g * sw);
  const int lo = std::min(a, b);
  const int hi = std::max(a, b);
  for (int k = hi - 1; k > lo; --k) swap_sites(k, fermionic);
  apply_two_site(lo, oriented);
  for (int k = lo + 1; k < hi; ++k) swap_sites(k, fermionic);
}

// ---------------------------------------------------------------------------

template <class Scalar>
Scalar overlap(const MatrixProductState<Scalar>& a, const MatrixProductState<Scalar>& b) {
  if (a.num_qubits() != b.num_qubits())
    throw DimensionError(fmt::format("overlap: {} vs {} qubits", a.num_qubits(), b.num_qubits()));
  Mat<Scalar> env = Mat<Scalar>::Ones(1, 1);
  for (int k = 0; k < a.num_qubits(); ++k) {
    const auto va = left_view(a.site(k));
    const auto vb = left_view(b.site(k));
    const Eigen::Index la = a.site(k).dimension(0);
    const Eigen::Index lb = b.site(k).dimension(0);
    Mat<Scalar> next = Mat<Scalar>::Zero(va.cols(), vb.cols());
    for (Eigen::Index p = 0; p < 2; ++p)
      next.noalias() += va.middleRows(p * la, la).adjoint() * (env * vb.middleRows(p * lb, lb));
    env = std::move(next);
  }
  return env(0, 0);
}

template <class Scalar>
Scalar expectation(const MatrixProductState<Scalar>& psi, const MatrixProductOperator<Scalar>& mpo) {
  if (psi.num_qubits() != mpo.num_qubits())
    throw DimensionError(fmt::format("expectation: state has {} qubits, operator {}",
                                     psi.num_qubits(), mpo.num_qubits()));
  auto env = detail::trivial_environment<Scalar>();
  for (int k = 0; k < psi.num_qubits(); ++k)
    env = detail::extend_left(env, psi.site(k), mpo.site(k));
  return env(0, 0, 0);
}

template <class Scalar>
double expectation_real(const MatrixProductState<Scalar>& psi,
                        const MatrixProductOperator<Scalar>& mpo, double* imag_residue) {
  const Scalar e = expectation(psi, mpo);
  if (imag_residue) *imag_residue = std::imag(e);
  return std::real(e);
}

template <class Scalar>
cx pauli_expectation(const MatrixProductState<Scalar>& psi, const PauliString& p) {
  const int n = psi.num_qubits();
  if (p.highest() >= n) throw DimensionError("pauli_expectation: string longer than the state");
  // Y handled in complex arithmetic even for real states.
  Mat<cx> env = Mat<cx>::Ones(1, 1);
  for (int k = 0; k < n; ++k) {
    const auto view = left_view(psi.site(k));
    const Eigen::Index l = psi.site(k).dimension(0);
    const Mat<cx> v = view.template cast<cx>();
    Mat<cx> next = Mat<cx>::Zero(v.cols(), v.cols());
    const PauliString local = single_pauli(k, p.at(k));
    for (std::uint64_t in = 0; in < 2; ++in) {
      const std::uint64_t out = in ^ ((local.x >> k) & 1U);
      const cx phase = apply_to_basis(local, in << k);
      next.noalias() += phase * v.middleRows(static_cast<Eigen::Index>(out) * l, l).adjoint() *
                        (env * v.middleRows(static_cast<Eigen::Index>(in) * l, l));
    }
    env = std::move(next);
  }
  return env(0, 0);
}

// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'D', 'F', 'V', 'Q', 'E', 'M', 'P', 'S'};

template <class T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in, const std::filesystem::path& path) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw ParseError("truncated checkpoint", 0, path.string());
  return v;
}

}  // namespace

template <class Scalar>
void save_checkpoint(const std::filesystem::path& path, const MatrixProductState<Scalar>& psi,
                     std::uint64_t ordering_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write checkpoint {}", path.string()));
  out.write(kMagic, sizeof(kMagic));
  put(out, kCheckpointVersion);
  put(out, scalar_kind<Scalar>());
  put(out, static_cast<std::uint32_t>(psi.num_qubits()));
  put(out, static_cast<std::uint32_t>(std::min(psi.policy().chi_max, 1 << 30)));
  put(out, psi.policy().cutoff);
  put(out, ordering_hash);
  put(out, static_cast<std::int32_t>(psi.center()));
  for (int k = 0; k < psi.num_qubits(); ++k) {
    const auto& a = psi.site(k);
    for (int d = 0; d < 3; ++d) put(out, static_cast<std::uint64_t>(a.dimension(d)));
    out.write(reinterpret_cast<const char*>(a.data()),
              static_cast<std::streamsize>(a.size() * sizeof(Scalar)));
  }
  if (!out) throw Error(fmt::format("failed writing checkpoint {}", path.string()));
}

template <class Scalar>
MatrixProductState<Scalar> load_checkpoint(const std::filesystem::path& path, CheckpointInfo* info) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open checkpoint", 0, path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw ParseError("not an MPS checkpoint", 0, path.string());
  const auto version = get<std::uint32_t>(in, path);
  if (version != kCheckpointVersion)
    throw ParseError(fmt::format("unsupported checkpoint version {}", version), 0, path.string());
  if (get<std::uint32_t>(in, path) != scalar_kind<Scalar>())
    throw ParseError("checkpoint scalar type does not match", 0, path.string());
  const auto n = get<std::uint32_t>(in, path);
  TruncationPolicy policy;
  policy.chi_max = static_cast<int>(get<std::uint32_t>(in, path));
  policy.cutoff = get<double>(in, path);
  const auto hash = get<std::uint64_t>(in, path);
  const auto center = get<std::int32_t>(in, path);
  std::vector<Eigen::Tensor<Scalar, 3>> sites;
  for (std::uint32_t k = 0; k < n; ++k) {
    std::array<Eigen::Index, 3> dims{};
    for (auto& d : dims) d = static_cast<Eigen::Index>(get<std::uint64_t>(in, path));
    if (dims[1] != 2 || dims[0] < 1 || dims[2] < 1 || dims[0] > (1 << 20) || dims[2] > (1 << 20))
      throw ParseError(fmt::format("corrupt dimensions at site {}", k), 0, path.string());
    Eigen::Tensor<Scalar, 3> a(dims[0], dims[1], dims[2]);
    in.read(reinterpret_cast<char*>(a.data()), static_cast<std::streamsize>(a.size() * sizeof(Scalar)));
    if (!in) throw ParseError("truncated checkpoint", 0, path.string());
    sites.push_back(std::move(a));
  }
  if (info) *info = {version, hash};
  return MatrixProductState<Scalar>(std::move(sites), policy, center);
}

#define DFVQE_INSTANTIATE(S)                                                                    \
  template class MatrixProductState<S>;                                                         \
  template S overlap<S>(const MatrixProductState<S>&, const MatrixProductState<S>&);             \
  template S expectation<S>(const MatrixProductState<S>&, const MatrixProductOperator<S>&);      \
  template double expectation_real<S>(const MatrixProductState<S>&,                             \
                                      const MatrixProductOperator<S>&, double*);                \
  template cx pauli_expectation<S>(const MatrixProductState<S>&, const PauliString&);           \
  template void save_checkpoint<S>(const std::filesystem::path&, const MatrixProductState<S>&,  \
                                   std::uint64_t);                                              \
  template MatrixProductState<S> load_checkpoint<S>(const std::filesystem::path&, CheckpointInfo*);

DFVQE_INSTANTIATE(double)
DFVQE_INSTANTIATE(cx)

#undef DFVQE_INSTANTIATE

}  // namespace dfvqe
