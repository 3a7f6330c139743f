// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfvqe/encode/pauli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "dfvqe/core/error.hpp"

namespace dfvqe {

namespace {

constexpr cx kIPow[4] = {cx(1, 0), cx(0, 1), cx(-1, 0), cx(0, -1)};

void check_qubit(int qubit) {
  if (qubit < 0 || qubit >= kMaxPauliQubits)
    throw DimensionError(fmt::format("qubit index {} outside [0, {})", qubit, kMaxPauliQubits));
}

}  // namespace

char PauliString::at(int qubit) const noexcept {
  const bool bx = (x >> qubit) & 1U;
  const bool bz = (z >> qubit) & 1U;
  return bx ? (bz ? 'Y' : 'X') : (bz ? 'Z' : 'I');
}

int PauliString::lowest() const noexcept {
  const auto m = x | z;
  return m == 0 ? -1 : std::countr_zero(m);
}

int PauliString::highest() const noexcept {
  const auto m = x | z;
  return m == 0 ? -1 : 63 - std::countl_zero(m);
}

PauliString single_pauli(int qubit, char op) {
  check_qubit(qubit);
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  switch (op) {
    case 'I': return {};
    case 'X': return {bit, 0};
    case 'Y': return {bit, bit};
    case 'Z': return {0, bit};
    default: throw ValidationError(fmt::format("invalid Pauli symbol '{}'", op));
  }
}

PauliString parse_pauli(std::string_view text) {
  if (text.size() > static_cast<std::size_t>(kMaxPauliQubits))
    throw DimensionError(fmt::format("Pauli string longer than {} qubits", kMaxPauliQubits));
  PauliString p;
  for (std::size_t q = 0; q < text.size(); ++q) {
    const auto s = single_pauli(static_cast<int>(q), text[q]);
    p.x |= s.x;
    p.z |= s.z;
  }
  return p;
}

std::string to_string(const PauliString& p, int num_qubits) {
  std::string out(static_cast<std::size_t>(num_qubits), 'I');
  for (int q = 0; q < num_qubits; ++q) out[static_cast<std::size_t>(q)] = p.at(q);
  return out;
}

std::pair<int, PauliString> multiply(const PauliString& a, const PauliString& b) noexcept {
  // P(x,z) = i^{|x&z|} X^x Z^z and Z^z1 X^x2 = (-1)^{|z1&x2|} X^x2 Z^z1.
  const PauliString c{a.x ^ b.x, a.z ^ b.z};
  const int phase = a.num_y() + b.num_y() + 2 * std::popcount(a.z & b.x) - c.num_y();
  return {((phase % 4) + 4) % 4, c};
}

cx apply_to_basis(const PauliString& p, std::uint64_t col) noexcept {
  const int phase = p.num_y() + 2 * std::popcount(p.z & col);
  return kIPow[phase & 3];
}

cx matrix_element(const PauliString& p, std::uint64_t row, std::uint64_t col) noexcept {
  if ((col ^ p.x) != row) return 0.0;
  return apply_to_basis(p, col);
}

// ---------------------------------------------------------------------------

PauliOperator::PauliOperator(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 0 || num_qubits > kMaxPauliQubits)
    throw DimensionError(fmt::format("Pauli operators support up to {} qubits (got {})",
                                     kMaxPauliQubits, num_qubits));
}

void PauliOperator::add(const PauliString& p, cx coefficient) {
  if (num_qubits_ < kMaxPauliQubits && ((p.x | p.z) >> num_qubits_) != 0)
    throw DimensionError(fmt::format("Pauli string acts outside {} qubits", num_qubits_));
  terms_[p] += coefficient;
}

PauliOperator& PauliOperator::operator+=(const PauliOperator& other) {
  if (other.num_qubits_ != num_qubits_)
    throw DimensionError(fmt::format("adding Pauli operators on {} and {} qubits", num_qubits_,
                                     other.num_qubits_));
  for (const auto& [p, c] : other.terms_) terms_[p] += c;
  return *this;
}

PauliOperator& PauliOperator::operator*=(cx scale) {
  for (auto& [p, c] : terms_) c *= scale;
  return *this;
}

PauliOperator operator*(const PauliOperator& a, const PauliOperator& b) {
  if (a.num_qubits_ != b.num_qubits_)
    throw DimensionError(fmt::format("multiplying Pauli operators on {} and {} qubits",
                                     a.num_qubits_, b.num_qubits_));
  PauliOperator out(a.num_qubits_);
  for (const auto& [pa, ca] : a.terms_)
    for (const auto& [pb, cb] : b.terms_) {
      const auto [phase, pc] = multiply(pa, pb);
      out.terms_[pc] += kIPow[phase] * ca * cb;
    }
  return out;
}

PauliOperator PauliOperator::adjoint() const {
  PauliOperator out(num_qubits_);
  for (const auto& [p, c] : terms_) out.terms_[p] = std::conj(c);
  return out;
}

void PauliOperator::prune(double tolerance) {
  std::erase_if(terms_, [tolerance](const auto& kv) { return std::abs(kv.second) < tolerance; });
}

PauliOperator PauliOperator::identity(int num_qubits, cx coefficient) {
  PauliOperator out(num_qubits);
  out.add(PauliString{}, coefficient);
  return out;
}

// ---------------------------------------------------------------------------

double PauliTermSum::constant() const noexcept {
  double c = 0.0;
  for (const auto& t : terms)
    if (t.string.is_identity()) c += t.coefficient;
  return c;
}

void PauliTermSum::canonicalize(double tolerance) {
  std::sort(terms.begin(), terms.end(),
            [](const PauliTerm& a, const PauliTerm& b) { return a.string < b.string; });
  std::vector<PauliTerm> merged;
  merged.reserve(terms.size());
  for (const auto& t : terms) {
    if (!merged.empty() && merged.back().string == t.string)
      merged.back().coefficient += t.coefficient;
    else
      merged.push_back(t);
  }
  std::erase_if(merged, [tolerance](const PauliTerm& t) { return std::abs(t.coefficient) < tolerance; });
  terms = std::move(merged);
}

PauliTermSum& PauliTermSum::operator+=(const PauliTermSum& other) {
  if (other.num_qubits != num_qubits)
    throw DimensionError(fmt::format("adding Pauli sums on {} and {} qubits", num_qubits,
                                     other.num_qubits));
  terms.insert(terms.end(), other.terms.begin(), other.terms.end());
  canonicalize();
  return *this;
}

PauliTermSum& PauliTermSum::operator*=(double scale) {
  for (auto& t : terms) t.coefficient *= scale;
  canonicalize();
  return *this;
}

PauliTermSum to_term_sum(const PauliOperator& op, double imag_tolerance) {
  PauliTermSum out;
  out.num_qubits = op.num_qubits();
  out.terms.reserve(op.size());
  for (const auto& [p, c] : op.terms()) {
    if (std::abs(c.imag()) > imag_tolerance)
      throw NumericalError(fmt::format("operator is not hermitian: {} has coefficient {}{:+}i",
                                       to_string(p, op.num_qubits()), c.real(), c.imag()));
    out.terms.push_back({c.real(), p});
  }
  out.canonicalize();
  return out;
}

PauliOperator to_operator(const PauliTermSum& sum) {
  PauliOperator out(sum.num_qubits);
  for (const auto& t : sum.terms) out.add(t.string, t.coefficient);
  return out;
}

Eigen::MatrixXcd dense_matrix(const PauliOperator& op) {
  const int n = op.num_qubits();
  if (n > 14) throw DimensionError(fmt::format("dense expansion limited to 14 qubits (got {})", n));
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [p, c] : op.terms())
    for (Eigen::Index col = 0; col < dim; ++col) {
      const auto u = static_cast<std::uint64_t>(col);
      m(static_cast<Eigen::Index>(u ^ p.x), col) += c * apply_to_basis(p, u);
    }
  return m;
}

Eigen::MatrixXcd dense_matrix(const PauliTermSum& sum) { return dense_matrix(to_operator(sum)); }

std::string dump_pauli_sum(const PauliTermSum& sum) {
  std::string out;
  for (const auto& t : sum.terms)
    out += fmt::format("{:.17g} {}\n", t.coefficient, to_string(t.string, sum.num_qubits));
  return out;
}

PauliTermSum parse_pauli_sum(std::string_view text) {
  PauliTermSum out;
  out.num_qubits = -1;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double c = 0.0;
    std::string s;
    if (!(ls >> c >> s))
      throw ParseError("expected `coefficient pauli_string`", line_no, "pauli_sum");
    if (out.num_qubits < 0) out.num_qubits = static_cast<int>(s.size());
    if (static_cast<int>(s.size()) != out.num_qubits)
      throw ParseError("inconsistent Pauli string length", line_no, "pauli_sum");
    out.terms.push_back({c, parse_pauli(s)});
  }
  if (out.num_qubits < 0) out.num_qubits = 0;
  out.canonicalize();
  return out;
}

PauliTermSum number_operator(int num_qubits, const std::vector<int>& qubits) {
  PauliOperator n(num_qubits);
  for (int q : qubits) {
    n.add(PauliString{}, 0.5);
    n.add(single_pauli(q, 'Z'), -0.5);
  }
  return to_term_sum(n);
}

PauliTermSum number_penalty(int num_qubits, const std::vector<int>& qubits, int target,
                            double weight) {
  PauliOperator d = to_operator(number_operator(num_qubits, qubits));
  d.add(PauliString{}, -static_cast<double>(target));
  PauliOperator sq = d * d;
  sq *= weight;
  return to_term_sum(sq);
}

}  // namespace dfvqe
