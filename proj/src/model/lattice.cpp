// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfvqe/model/lattice.hpp"

#include <fmt/format.h>

#include "dfvqe/core/error.hpp"

namespace dfvqe {

long long LatticeSpec::num_bonds() const noexcept {
  return static_cast<long long>(nx) * (ny - 1) + static_cast<long long>(ny) * (nx - 1);
}

std::vector<Bond> LatticeSpec::bonds() const {
  std::vector<Bond> out;
  out.reserve(static_cast<std::size_t>(num_bonds()));
  for (int y = 0; y < ny; ++y)
    for (int x = 0; x + 1 < nx; ++x) out.push_back({site(x, y), site(x + 1, y), Direction::x});
  for (int y = 0; y + 1 < ny; ++y)
    for (int x = 0; x < nx; ++x) out.push_back({site(x, y), site(x, y + 1), Direction::y});
  return out;
}

void LatticeSpec::validate() const {
  if (nx < 1 || ny < 1)
    throw ValidationError(fmt::format("lattice: nx and ny must be >= 1 (got {}x{})", nx, ny));
}

}  // namespace dfvqe
