// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/CXX11/Tensor>

#include "dfvqe/encode/mpo.hpp"
#include "dfvqe/encode/pauli.hpp"

namespace dfvqe {

/// Bond truncation rule applied after every two-site update: keep at most
/// `chi_max` singular values and drop those with s^2 / sum(s^2) < `cutoff`.
struct TruncationPolicy {
  int chi_max = 1 << 30;
  double cutoff = 1e-12;
};

struct TruncationStats {
  double discarded = 0.0;  // sum of dropped s^2 (absolute)
  int kept = 0;
};

/// 2^(n/2), saturating at 2^30.
int max_chi_default(int num_qubits);

/// Qubit-chain tensor train; site k is A(left, physical, right).
///
/// The state is kept in mixed canonical form around `center()` whenever the
/// center is known (>= 0). Operations move the center only when they need it.
template <class Scalar>
class MatrixProductState {
 public:
  using Site = Eigen::Tensor<Scalar, 3>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Gate = Eigen::Matrix<Scalar, 4, 4>;
  using Gate1 = Eigen::Matrix<Scalar, 2, 2>;

  MatrixProductState() = default;
  /// Takes ownership of `sites`; `center` = -1 means no canonical form is assumed.
  MatrixProductState(std::vector<Site> sites, TruncationPolicy policy, int center = -1);

  /// Computational basis state; bits[q] in {0, 1}.
  static MatrixProductState product_state(const std::vector<int>& bits,
                                          TruncationPolicy policy = {});
  /// Exact decomposition of a dense vector (qubit 0 = least significant bit),
  /// then truncation by `policy`.
  static MatrixProductState from_dense(const Vector& psi, int num_qubits,
                                       TruncationPolicy policy = {});
  /// Dense amplitudes; limited to 26 qubits.
  Vector to_dense() const;

  int num_qubits() const noexcept { return static_cast<int>(sites_.size()); }
  const TruncationPolicy& policy() const noexcept { return policy_; }
  void set_policy(TruncationPolicy p) noexcept { policy_ = p; }
  int center() const noexcept { return center_; }

  const Site& site(int k) const { return sites_[static_cast<std::size_t>(k)]; }
  /// Direct access; forgets the canonical form.
  Site& mutable_site(int k);
  /// Replaces site k while asserting that the canonical center is `center`.
  void assign_site(int k, Site tensor, int center);

  std::vector<int> bond_dims() const;
  int max_bond_dim() const;

  double discarded_weight() const noexcept { return discarded_; }
  void reset_discarded_weight() noexcept { discarded_ = 0.0; }
  long swap_count() const noexcept { return swaps_; }

  /// Brings the orthogonality center to site k (QR sweeps, no truncation).
  void move_center(int k);
  double norm() const;
  void normalize();

  void apply_single(int qubit, const Gate1& u);
  /// Gate on sites (k, k+1); basis index 2 * p_k + p_{k+1}.
  TruncationStats apply_two_site(int k, const Gate& g);
  /// Gate on arbitrary qubits a != b in the basis |q_a q_b> (q_a is the high
  /// bit). Non-adjacent pairs are routed with SWAPs, or with fermionic SWAPs
  /// when `fermionic` is set, and swapped back afterwards.
  void apply_gate(int a, int b, const Gate& g, bool fermionic = false);
  void swap_sites(int k, bool fermionic = false);

  /// Two-site wavefunction on (k, k+1) as a (2L) x (2R) matrix with row
  /// l + L * p_k and column p_{k+1} + 2 * r.
  Matrix two_site_theta(int k) const;
  /// Splits `theta` back into sites k, k+1 by truncated SVD. The center ends
  /// on k+1 if `center_right`, else on k.
  TruncationStats split_two_site(int k, const Matrix& theta, bool center_right);

  template <class Other>
  MatrixProductState<Other> cast() const {
    std::vector<typename MatrixProductState<Other>::Site> out;
    out.reserve(sites_.size());
    for (const auto& a : sites_) out.push_back(a.template cast<Other>());
    return MatrixProductState<Other>(std::move(out), policy_, center_);
  }

 private:
  void shift_center_right(int k);
  void shift_center_left(int k);
  TruncationStats truncate_split(int k, const Matrix& theta, bool center_right);

  std::vector<Site> sites_;
  TruncationPolicy policy_;
  int center_ = -1;
  double discarded_ = 0.0;
  long swaps_ = 0;
};

/// <a|b>.
template <class Scalar>
Scalar overlap(const MatrixProductState<Scalar>& a, const MatrixProductState<Scalar>& b);

/// <psi|W|psi> (not divided by the norm).
template <class Scalar>
Scalar expectation(const MatrixProductState<Scalar>& psi, const MatrixProductOperator<Scalar>& mpo);

/// Real part of the sandwich; the imaginary part is written to `imag_residue`.
template <class Scalar>
double expectation_real(const MatrixProductState<Scalar>& psi,
                        const MatrixProductOperator<Scalar>& mpo, double* imag_residue = nullptr);

/// <psi|P|psi>.
template <class Scalar>
cx pauli_expectation(const MatrixProductState<Scalar>& psi, const PauliString& p);

struct CheckpointInfo {
  std::uint32_t version = 0;
  std::uint64_t ordering_hash = 0;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

template <class Scalar>
void save_checkpoint(const std::filesystem::path& path, const MatrixProductState<Scalar>& psi,
                     std::uint64_t ordering_hash);

/// Throws ParseError on a bad magic, version, scalar kind or truncated file.
template <class Scalar>
MatrixProductState<Scalar> load_checkpoint(const std::filesystem::path& path,
                                           CheckpointInfo* info = nullptr);

}  // namespace dfvqe
