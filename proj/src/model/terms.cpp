// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfvqe/model/terms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "dfvqe/core/error.hpp"

namespace dfvqe {

std::string_view to_string(TermKind kind) {
  switch (kind) {
    case TermKind::hop_intra: return "hop_intra";
    case TermKind::hop_inter_onsite: return "hop_inter_onsite";
    case TermKind::onsite_potential: return "onsite_potential";
    case TermKind::u_onsite: return "u_onsite";
    case TermKind::u_inter_onsite: return "u_inter_onsite";
    case TermKind::v_offsite: return "v_offsite";
  }
  return "unknown";
}

bool drops_onsite_potential(const ExtendedHubbardModel& model, OnsitePotentialPolicy policy) {
  switch (policy) {
    case OnsitePotentialPolicy::keep: return false;
    case OnsitePotentialPolicy::drop: return true;
    case OnsitePotentialPolicy::automatic: return model.bands == 1;
  }
  return false;
}

TermList expand_terms(const ExtendedHubbardModel& model, OnsitePotentialPolicy policy) {
  model.validate();
  const bool drop = drops_onsite_potential(model, policy);
  const int nb = model.bands;
  const int n_sites = model.num_sites();
  const auto bonds = model.lattice.bonds();
  constexpr SpinPattern spins[] = {SpinPattern::up, SpinPattern::down};
  auto scale = [&](const Bond& b) {
    return model.direction_scale[b.direction == Direction::x ? 0 : 1];
  };

  const auto counts = count_terms(model.lattice.nx, model.lattice.ny, nb, drop);
  TermList terms;
  terms.reserve(static_cast<std::size_t>(counts.total));

  for (const auto& bond : bonds)
    for (int i = 0; i < nb; ++i)
      for (auto s : spins)
        terms.push_back({TermKind::hop_intra, i, i, bond.a, bond.b, s, true,
                         model.t_intra(i, i) * scale(bond)});

  for (int site = 0; site < n_sites; ++site)
    for (auto s : spins)
      for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j)
          if (i != j)
            terms.push_back({TermKind::hop_inter_onsite, i, j, site, site, s, false,
                             model.t_onsite(i, j)});

  if (!drop)
    for (int site = 0; site < n_sites; ++site)
      for (auto s : spins)
        for (int i = 0; i < nb; ++i)
          terms.push_back({TermKind::onsite_potential, i, i, site, site, s, false,
                           model.t_onsite(i, i)});

  for (int site = 0; site < n_sites; ++site)
    for (int i = 0; i < nb; ++i)
      terms.push_back({TermKind::u_onsite, i, i, site, site, SpinPattern::up_down, false,
                       model.u_onsite(i, i)});

  for (int site = 0; site < n_sites; ++site)
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j)
        if (i != j)
          terms.push_back({TermKind::u_inter_onsite, i, j, site, site, SpinPattern::summed, false,
                           0.5 * model.u_onsite(i, j)});

  for (const auto& bond : bonds)
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j)
        terms.push_back({TermKind::v_offsite, i, j, bond.a, bond.b, SpinPattern::summed, false,
                         model.v_offsite(i, j) * scale(bond)});

  for (const auto& t : terms)
    if (!std::isfinite(t.coefficient)) throw NumericalError("expand_terms: non-finite coefficient");
  return terms;
}

namespace {

using wide = __int128;

std::int64_t narrow(wide v, const char* what) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < 0)
    throw std::overflow_error(fmt::format("{}: count exceeds 64-bit range", what));
  return static_cast<std::int64_t>(v);
}

void require_positive(std::int64_t v, const char* name) {
  if (v < 1) throw ValidationError(fmt::format("{} must be >= 1 (got {})", name, v));
}

wide checked_mul(wide a, wide b, const char* what) {
  // Operands are non-negative and each below 2^63, so the product fits in 126 bits.
  wide r = a * b;
  if (a != 0 && r / a != b) throw std::overflow_error(fmt::format("{}: overflow", what));
  if (r > std::numeric_limits<std::int64_t>::max())
    throw std::overflow_error(fmt::format("{}: count exceeds 64-bit range", what));
  return r;
}

}  // namespace

TermCounts count_terms(std::int64_t nx, std::int64_t ny, std::int64_t nb,
                       bool drop_onsite_potential) {
  require_positive(nx, "nx");
  require_positive(ny, "ny");
  require_positive(nb, "nb");
  const wide n = checked_mul(nx, ny, "count_terms");
  const wide bonds = checked_mul(nx, ny - 1, "count_terms") + checked_mul(ny, nx - 1, "count_terms");
  const wide b = nb;

  TermCounts c;
  c.hop_intra = narrow(checked_mul(2 * b, bonds, "count_terms"), "count_terms");
  c.hop_inter_onsite = narrow(checked_mul(checked_mul(2 * b, b - 1, "count_terms"), n, "count_terms"),
                              "count_terms");
  c.onsite_potential =
      drop_onsite_potential ? 0 : narrow(checked_mul(2 * b, n, "count_terms"), "count_terms");
  c.u_onsite = narrow(checked_mul(b, n, "count_terms"), "count_terms");
  c.u_inter_onsite =
      narrow(checked_mul(checked_mul(b, b - 1, "count_terms"), n, "count_terms"), "count_terms");
  c.v_offsite = narrow(checked_mul(checked_mul(b, b, "count_terms"), bonds, "count_terms"),
                       "count_terms");

  // N_b [ (N_b + 2) B + 3 N_b N ]
  wide total = checked_mul(b, checked_mul(b + 2, bonds, "count_terms") +
                                  checked_mul(3 * b, n, "count_terms"),
                           "count_terms");
  if (drop_onsite_potential) total -= checked_mul(2 * b, n, "count_terms");
  c.total = narrow(total, "count_terms");
  return c;
}

std::int64_t count_full_terms(std::int64_t nx, std::int64_t ny, std::int64_t nbf) {
  require_positive(nx, "nx");
  require_positive(ny, "ny");
  require_positive(nbf, "nbf");
  const wide m = checked_mul(checked_mul(nx, ny, "count_full_terms"), nbf, "count_full_terms");
  const wide m2 = checked_mul(m, m, "count_full_terms");
  const wide m4 = checked_mul(m2, m2, "count_full_terms");
  return narrow(2 * m2 + checked_mul(4, m4, "count_full_terms"), "count_full_terms");
}

CompressionRatio compression_ratio(std::int64_t nx, std::int64_t ny, std::int64_t nb,
                                   std::int64_t nbf, bool drop_onsite_potential) {
  const auto compressed = count_terms(nx, ny, nb, drop_onsite_potential).total;
  const auto full = count_full_terms(nx, ny, nbf);
  CompressionRatio r;
  r.exact = static_cast<double>(compressed) / static_cast<double>(full);
  const double dnb = static_cast<double>(nb);
  const double dnbf = static_cast<double>(nbf);
  r.leading_order = dnb * dnb / (std::pow(dnbf, 4) * std::pow(static_cast<double>(nx), 3) *
                                 std::pow(static_cast<double>(ny), 3));
  return r;
}

double one_norm(const ExtendedHubbardModel& model) {
  const auto terms = expand_terms(model);
  double dominant = 0.0;
  for (const auto& t : terms)
    if (t.kind == TermKind::hop_intra) dominant = std::max(dominant, std::abs(t.coefficient));
  if (dominant == 0.0)
    throw NumericalError("one_norm: no nonzero intra-band nearest-neighbour hopping to normalise by");

  double hopping = 0.0;
  double interaction = 0.0;
  for (const auto& t : terms) {
    const double a = std::abs(t.coefficient);
    switch (t.kind) {
      // One-body sums carry no spin index: count the spin-up copy only.
      case TermKind::hop_intra:
        if (t.spin == SpinPattern::up) hopping += 2.0 * a;  // (R,R') and (R',R)
        break;
      case TermKind::hop_inter_onsite:
      case TermKind::onsite_potential:
        if (t.spin == SpinPattern::up) hopping += a;
        break;
      case TermKind::u_onsite: interaction += a; break;
      case TermKind::u_inter_onsite: interaction += 2.0 * a; break;  // stored as U/2
      case TermKind::v_offsite: interaction += 2.0 * a; break;       // (R,R') and (R',R)
    }
  }
  return (hopping + 0.5 * interaction) / dominant;
}

}  // namespace dfvqe
