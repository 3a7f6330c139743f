// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace dfvqe {

enum class Boundary { open };

enum class Direction { x, y };

/// Nearest-neighbour pair with `a < b`; `b` is the +x or +y neighbour of `a`.
struct Bond {
  int a = 0;
  int b = 0;
  Direction direction = Direction::x;

  friend bool operator==(const Bond&, const Bond&) = default;
};

/// Rectangular nx-by-ny square lattice. Sites are numbered row-major,
/// `site = y * nx + x`.
struct LatticeSpec {
  int nx = 1;
  int ny = 1;
  Boundary boundary = Boundary::open;

  int num_sites() const noexcept { return nx * ny; }
  int site(int x, int y) const noexcept { return y * nx + x; }
  int x_of(int site) const noexcept { return site % nx; }
  int y_of(int site) const noexcept { return site / nx; }

  /// Number of nearest-neighbour pairs, nx(ny-1) + ny(nx-1).
  long long num_bonds() const noexcept;

  /// All open-boundary nearest-neighbour pairs: x-bonds first, then y-bonds,
  /// each in increasing order of the lower site.
  std::vector<Bond> bonds() const;

  /// Throws ValidationError unless nx >= 1 and ny >= 1.
  void validate() const;
};

}  // namespace dfvqe
