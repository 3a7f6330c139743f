// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace dfvqe {

using cx = std::complex<double>;

/// Maximum register width of a bit-packed Pauli string.
inline constexpr int kMaxPauliQubits = 64;

/// Pauli string in symplectic form: qubit q carries X if bit q of `x` is set,
/// Z if bit q of `z` is set, and Y (not i XZ, the hermitian one) if both are.
struct PauliString {
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  bool is_identity() const noexcept { return (x | z) == 0; }
  int weight() const noexcept { return std::popcount(x | z); }
  int num_y() const noexcept { return std::popcount(x & z); }
  /// 'I', 'X', 'Y' or 'Z'.
  char at(int qubit) const noexcept;
  /// Lowest / highest non-identity qubit; -1 for the identity.
  int lowest() const noexcept;
  int highest() const noexcept;

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend auto operator<=>(const PauliString&, const PauliString&) = default;
};

struct PauliStringHash {
  std::size_t operator()(const PauliString& p) const noexcept {
    return std::hash<std::uint64_t>{}(p.x * 0x9e3779b97f4a7c15ULL ^ p.z);
  }
};

/// Single-qubit Pauli `op` in {I, X, Y, Z} on `qubit`.
PauliString single_pauli(int qubit, char op);

/// Parses "XIZY" (character k acts on qubit k).
PauliString parse_pauli(std::string_view text);

/// Character k of the result describes qubit k.
std::string to_string(const PauliString& p, int num_qubits);

/// a * b = i^phase * c, with phase in [0, 4).
std::pair<int, PauliString> multiply(const PauliString& a, const PauliString& b) noexcept;

/// <row| P |col> for computational basis states (qubit 0 = least significant bit).
cx matrix_element(const PauliString& p, std::uint64_t row, std::uint64_t col) noexcept;

/// P|col> = phase * |col ^ p.x>; returns the phase.
cx apply_to_basis(const PauliString& p, std::uint64_t col) noexcept;

/// General complex linear combination of Pauli strings.
class PauliOperator {
 public:
  explicit PauliOperator(int num_qubits = 0);

  int num_qubits() const noexcept { return num_qubits_; }
  const std::unordered_map<PauliString, cx, PauliStringHash>& terms() const noexcept {
    return terms_;
  }
  std::size_t size() const noexcept { return terms_.size(); }

  void add(const PauliString& p, cx coefficient);
  PauliOperator& operator+=(const PauliOperator& other);
  PauliOperator& operator*=(cx scale);
  friend PauliOperator operator*(const PauliOperator& a, const PauliOperator& b);
  friend PauliOperator operator+(PauliOperator a, const PauliOperator& b) { return a += b; }

  PauliOperator adjoint() const;
  /// Removes entries with |coefficient| < tolerance.
  void prune(double tolerance = 1e-14);

  static PauliOperator identity(int num_qubits, cx coefficient = 1.0);

 private:
  int num_qubits_;
  std::unordered_map<PauliString, cx, PauliStringHash> terms_;
};

struct PauliTerm {
  double coefficient = 0.0;
  PauliString string;
};

/// Hermitian operator with real coefficients; canonical form has unique
/// strings sorted by (x, z) and no entries below 1e-14 in magnitude.
struct PauliTermSum {
  int num_qubits = 0;
  std::vector<PauliTerm> terms;

  /// Coefficient of the identity string (0 if absent).
  double constant() const noexcept;
  /// Merges duplicates, drops |c| < tolerance, sorts.
  void canonicalize(double tolerance = 1e-14);

  PauliTermSum& operator+=(const PauliTermSum& other);
  friend PauliTermSum operator+(PauliTermSum a, const PauliTermSum& b) { return a += b; }
  PauliTermSum& operator*=(double scale);
};

/// Converts to real coefficients. Throws NumericalError if any imaginary part
/// exceeds `imag_tolerance` (the operator is not hermitian).
PauliTermSum to_term_sum(const PauliOperator& op, double imag_tolerance = 1e-12);

PauliOperator to_operator(const PauliTermSum& sum);

/// Dense 2^n x 2^n matrix; throws DimensionError above 14 qubits.
Eigen::MatrixXcd dense_matrix(const PauliOperator& op);
Eigen::MatrixXcd dense_matrix(const PauliTermSum& sum);

/// Text form: one `coeff pauli_string` line per term.
std::string dump_pauli_sum(const PauliTermSum& sum);
PauliTermSum parse_pauli_sum(std::string_view text);

/// weight * (sum_{q in qubits} n_q - target)^2 with n_q = (I - Z_q) / 2.
PauliTermSum number_penalty(int num_qubits, const std::vector<int>& qubits, int target,
                            double weight);

/// sum_{q in qubits} n_q.
PauliTermSum number_operator(int num_qubits, const std::vector<int>& qubits);

}  // namespace dfvqe
