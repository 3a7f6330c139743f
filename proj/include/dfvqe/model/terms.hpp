// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "dfvqe/model/model.hpp"

namespace dfvqe {

enum class TermKind {
  hop_intra,         // t (a+_iR a_iR' + a+_iR' a_iR), one spin, one bond
  hop_inter_onsite,  // t_ij a+_iR a_jR, one spin, ordered band pair i != j
  onsite_potential,  // eps_i n_iR, one spin
  u_onsite,          // U_ii n_iRup n_iRdn
  u_inter_onsite,    // (U_ij / 2) n_iR n_jR, ordered band pair i != j, spins summed
  v_offsite,         // V_ij n_iR n_jR', band i on site_i, band j on site_j
};

std::string_view to_string(TermKind kind);

/// Spin content of a term. One-body terms act on a single spin species;
/// `up_down` is the on-site n_up n_dn product; `summed` means n = n_up + n_dn
/// on both factors.
enum class SpinPattern { up, down, up_down, summed };

/// One Hamiltonian term. `site_i == site_j` for on-site kinds.
///
/// Intra-band hopping is stored once per spin species and bond, and the term
/// includes both hopping directions (the hermitian conjugate). The factor 2 in
/// the closed-form count is therefore the spin sum; the direction sum is folded
/// into each term (`includes_conjugate`).
struct HubbardTerm {
  TermKind kind = TermKind::hop_intra;
  int band_i = 0;
  int band_j = 0;
  int site_i = 0;
  int site_j = 0;
  SpinPattern spin = SpinPattern::up;
  bool includes_conjugate = false;
  double coefficient = 0.0;  // eV
};

using TermList = std::vector<HubbardTerm>;

/// Whether the 2 N_b N on-site potential terms are enumerated.
enum class OnsitePotentialPolicy {
  automatic,  // dropped for single-band models (t_iRiR = 0 convention)
  keep,
  drop,
};

/// Enumerates every structural nearest-neighbour term, zero coefficients
/// included, so that the list length always matches `count_terms`. No
/// inter-band hopping between different sites is generated.
TermList expand_terms(const ExtendedHubbardModel& model,
                      OnsitePotentialPolicy policy = OnsitePotentialPolicy::automatic);

bool drops_onsite_potential(const ExtendedHubbardModel& model, OnsitePotentialPolicy policy);

struct TermCounts {
  std::int64_t hop_intra = 0;
  std::int64_t hop_inter_onsite = 0;
  std::int64_t onsite_potential = 0;
  std::int64_t u_onsite = 0;
  std::int64_t u_inter_onsite = 0;
  std::int64_t v_offsite = 0;
  /// Closed form N_b[(N_b+2)B + 3 N_b N] (minus 2 N_b N when dropped).
  std::int64_t total = 0;

  std::int64_t breakdown_sum() const noexcept {
    return hop_intra + hop_inter_onsite + onsite_potential + u_onsite + u_inter_onsite + v_offsite;
  }
};

/// Per-category counts; throws std::overflow_error if a count exceeds int64.
TermCounts count_terms(std::int64_t nx, std::int64_t ny, std::int64_t nb,
                       bool drop_onsite_potential);

/// 2M^2 + 4M^4 with M = nx * ny * nbf: terms of the unrestricted many-body Hamiltonian.
std::int64_t count_full_terms(std::int64_t nx, std::int64_t ny, std::int64_t nbf);

struct CompressionRatio {
  double exact = 0.0;          // count_terms / count_full_terms
  double leading_order = 0.0;  // nb^2 / (nbf^4 nx^3 ny^3)
};

CompressionRatio compression_ratio(std::int64_t nx, std::int64_t ny, std::int64_t nb,
                                   std::int64_t nbf, bool drop_onsite_potential = false);

/// Dimensionless 1-norm over the nearest-neighbour term list: every t and U
/// is divided by the largest |intra-band nearest-neighbour hopping|; hopping
/// magnitudes are summed over ordered site pairs and band pairs, interaction
/// magnitudes likewise with a factor 1/2. Spin is not summed.
///
/// Beyond-nearest-neighbour couplings are absent, so the value is a lower
/// bound on an all-neighbour 1-norm. Throws NumericalError when every
/// intra-band hopping is zero.
double one_norm(const ExtendedHubbardModel& model);

}  // namespace dfvqe
