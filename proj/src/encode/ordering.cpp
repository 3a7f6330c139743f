// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfvqe/encode/ordering.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

#include "dfvqe/core/error.hpp"

namespace dfvqe {

std::string_view to_string(SpinScheme scheme) {
  return scheme == SpinScheme::spin_interleaved ? "spin_interleaved" : "spin_blocked";
}

SpinScheme parse_spin_scheme(std::string_view text) {
  if (text == "spin_interleaved" || text == "interleaved") return SpinScheme::spin_interleaved;
  if (text == "spin_blocked" || text == "blocked") return SpinScheme::spin_blocked;
  throw ValidationError(fmt::format("unknown spin ordering scheme '{}'", text));
}

QubitOrdering::QubitOrdering(const LatticeSpec& lattice, int bands, SpinScheme scheme,
                             SitePath /*path*/)
    : lattice_(lattice), bands_(bands), num_sites_(lattice.num_sites()), scheme_(scheme) {
  lattice.validate();
  if (bands < 1) throw ValidationError("ordering: bands must be >= 1");
  const int n = 2 * num_sites_ * bands_;
  to_qubit_.assign(static_cast<std::size_t>(n), -1);
  to_orbital_.resize(static_cast<std::size_t>(n));
  const int block = num_sites_ * bands_;
  for (int site = 0; site < num_sites_; ++site) {
    const int pos = path_position(site);
    for (int band = 0; band < bands_; ++band)
      for (int s = 0; s < 2; ++s) {
        const int orb = pos * bands_ + band;
        const int q = scheme_ == SpinScheme::spin_interleaved ? 2 * orb + s : s * block + orb;
        to_qubit_[static_cast<std::size_t>((site * bands_ + band) * 2 + s)] = q;
        to_orbital_[static_cast<std::size_t>(q)] = {site, band, static_cast<Spin>(s)};
      }
  }
}

int QubitOrdering::path_position(int site) const {
  const int x = lattice_.x_of(site);
  const int y = lattice_.y_of(site);
  return y * lattice_.nx + (y % 2 == 0 ? x : lattice_.nx - 1 - x);
}

int QubitOrdering::qubit(int site, int band, Spin spin) const {
  if (site < 0 || site >= num_sites_ || band < 0 || band >= bands_)
    throw std::out_of_range(fmt::format("ordering: (site {}, band {}) outside {} sites x {} bands",
                                        site, band, num_sites_, bands_));
  return to_qubit_[static_cast<std::size_t>((site * bands_ + band) * 2 + static_cast<int>(spin))];
}

const SpinOrbital& QubitOrdering::orbital(int qubit) const {
  if (qubit < 0 || qubit >= num_qubits())
    throw std::out_of_range(fmt::format("ordering: qubit {} outside [0, {})", qubit, num_qubits()));
  return to_orbital_[static_cast<std::size_t>(qubit)];
}

std::vector<int> QubitOrdering::band_qubits(int band) const {
  std::vector<int> out;
  for (int site = 0; site < num_sites_; ++site)
    for (auto s : {Spin::up, Spin::down}) out.push_back(qubit(site, band, s));
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t QubitOrdering::hash() const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(lattice_.nx));
  mix(static_cast<std::uint64_t>(lattice_.ny));
  mix(static_cast<std::uint64_t>(bands_));
  for (int q : to_qubit_) mix(static_cast<std::uint64_t>(q));
  return h;
}

QubitOrdering build_ordering(const ExtendedHubbardModel& model, SpinScheme scheme) {
  model.validate();
  return QubitOrdering(model.lattice, model.bands, scheme);
}

}  // namespace dfvqe
