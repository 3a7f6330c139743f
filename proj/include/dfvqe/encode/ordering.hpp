// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "dfvqe/model/model.hpp"

namespace dfvqe {

enum class Spin : int { up = 0, down = 1 };

enum class SpinScheme {
  spin_interleaved,  // (site, band, up), (site, band, down) adjacent
  spin_blocked,      // all spin-up orbitals first, then all spin-down
};

enum class SitePath { row_major_snake };

std::string_view to_string(SpinScheme scheme);
SpinScheme parse_spin_scheme(std::string_view text);

struct SpinOrbital {
  int site = 0;
  int band = 0;
  Spin spin = Spin::up;

  friend bool operator==(const SpinOrbital&, const SpinOrbital&) = default;
};

/// Bijection (site, band, spin) <-> qubit index.
///
/// Sites are visited along a row-major snake: even rows left to right, odd
/// rows right to left, so that both x-neighbours and the row-end y-neighbour
/// stay close along the chain.
class QubitOrdering {
 public:
  QubitOrdering(const LatticeSpec& lattice, int bands, SpinScheme scheme,
                SitePath path = SitePath::row_major_snake);

  int num_qubits() const noexcept { return static_cast<int>(to_orbital_.size()); }
  int num_sites() const noexcept { return num_sites_; }
  int bands() const noexcept { return bands_; }
  SpinScheme scheme() const noexcept { return scheme_; }
  const LatticeSpec& lattice() const noexcept { return lattice_; }

  /// Throws std::out_of_range for indices outside the lattice.
  int qubit(int site, int band, Spin spin) const;
  int qubit(const SpinOrbital& o) const { return qubit(o.site, o.band, o.spin); }
  const SpinOrbital& orbital(int qubit) const;

  /// Position of `site` along the snake path.
  int path_position(int site) const;

  /// Qubits belonging to one band (both spins), ascending.
  std::vector<int> band_qubits(int band) const;

  /// Stable FNV-1a digest of the map; stored in checkpoints.
  std::uint64_t hash() const noexcept;

 private:
  LatticeSpec lattice_;
  int bands_;
  int num_sites_;
  SpinScheme scheme_;
  std::vector<int> to_qubit_;  // index (site * bands + band) * 2 + spin
  std::vector<SpinOrbital> to_orbital_;
};

QubitOrdering build_ordering(const ExtendedHubbardModel& model,
                             SpinScheme scheme = SpinScheme::spin_interleaved);

}  // namespace dfvqe
