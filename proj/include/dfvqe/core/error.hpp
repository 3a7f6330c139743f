// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace dfvqe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document. Carries the line (1-based, 0 if unknown) and the
/// offending field path.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::string field);

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// Well-formed input that violates a model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Operands with incompatible sizes (qubit counts, bond dimensions, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure (division by zero, non-finite values, failed decomposition).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace dfvqe
