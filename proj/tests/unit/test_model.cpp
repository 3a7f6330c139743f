// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <tuple>

#include <gtest/gtest.h>

#include "dfvqe/core/error.hpp"
#include "dfvqe/model/model.hpp"
#include "dfvqe/model/terms.hpp"
#include "support.hpp"

namespace dfvqe {
namespace {

TEST(Lattice, BondsAndSites) {
  LatticeSpec l{3, 2};
  EXPECT_EQ(l.num_sites(), 6);
  EXPECT_EQ(l.num_bonds(), 7);
  const auto bonds = l.bonds();
  ASSERT_EQ(bonds.size(), 7U);
  for (const auto& b : bonds) {
    EXPECT_LT(b.a, b.b);
    const int dx = l.x_of(b.b) - l.x_of(b.a);
    const int dy = l.y_of(b.b) - l.y_of(b.a);
    EXPECT_EQ(dx + dy, 1);
    EXPECT_EQ(b.direction == Direction::x, dx == 1);
  }
  EXPECT_THROW((LatticeSpec{0, 1}.validate()), ValidationError);
}

TEST(LoadModel, BundledCa2CuO3) {
  const auto m = load_model(testing::material_path("ca2cuo3"));
  EXPECT_EQ(m.lattice.nx, 10);
  EXPECT_EQ(m.lattice.ny, 1);
  EXPECT_EQ(m.bands, 1);
  EXPECT_DOUBLE_EQ(m.t_intra(0, 0), -0.491);
  EXPECT_DOUBLE_EQ(m.u_onsite(0, 0), 3.578);
  EXPECT_DOUBLE_EQ(m.v_offsite(0, 0), 0.903);
  EXPECT_EQ(m.num_electrons(), 10);
}

TEST(LoadModel, BundledWTe2) {
  const auto m = load_model(testing::material_path("wte2"));
  EXPECT_EQ(m.bands, 4);
  EXPECT_DOUBLE_EQ(m.u_onsite(0, 0), 1.107);
  EXPECT_DOUBLE_EQ(m.v_offsite(1, 0), 0.754);
  EXPECT_EQ(m.num_electrons(), 16);
  EXPECT_EQ(m.num_spin_orbitals(), 32);
}

TEST(LoadModel, BundledSrVO3) {
  const auto m = load_model(testing::material_path("srvo3"));
  EXPECT_EQ(m.bands, 3);
  EXPECT_DOUBLE_EQ(m.t_intra(2, 2), -0.027);
  EXPECT_DOUBLE_EQ(m.u_onsite(0, 1), 2.349);
  EXPECT_EQ(m.num_spin_orbitals(), 54);
}

TEST(ParseModel, ShapeMismatchIsValidationError) {
  const char* doc = R"({
    "lattice": {"nx": 2, "ny": 1}, "bands": 2, "filling": [2, 0],
    "t_intra": [[-1, 0], [0, -1]],
    "u_onsite": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    "v_offsite": [[0, 0], [0, 0]]
  })";
  try {
    parse_model(doc);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("u_onsite"), std::string::npos);
  }
}

TEST(ParseModel, NegativeDiagonalURejected) {
  const char* doc = R"({"lattice": {"nx": 1, "ny": 1}, "bands": 1, "filling": [1],
    "t_intra": [[-1]], "u_onsite": [[-0.5]], "v_offsite": [[0]]})";
  EXPECT_THROW(parse_model(doc), ValidationError);
}

TEST(ParseModel, SyntaxErrorCarriesLine) {
  const std::string doc = "{\n  \"lattice\": {\"nx\": 1, \"ny\": 1},\n  \"bands\": 1,,\n}";
  try {
    parse_model(doc);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3U);
  }
}

TEST(ParseModel, WrongTypeNamesField) {
  const std::string doc =
      "{\n\"lattice\": {\"nx\": 1, \"ny\": 1},\n\"bands\": \"one\",\n\"filling\": [1],\n"
      "\"t_intra\": [[-1]], \"u_onsite\": [[1]], \"v_offsite\": [[0]]}";
  try {
    parse_model(doc);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field(), "bands");
    EXPECT_EQ(e.line(), 3U);
  }
}

TEST(ParseModel, MissingFieldIsParseError) {
  EXPECT_THROW(parse_model(R"({"lattice": {"nx": 1, "ny": 1}, "bands": 1})"), ParseError);
}

TEST(ParseModel, DumpRoundTrip) {
  std::mt19937_64 rng(7);
  const auto m = testing::random_model(rng, 2, 2, 3);
  const auto back = parse_model(dump_model(m));
  EXPECT_EQ(back.lattice.nx, 2);
  EXPECT_EQ(back.bands, 3);
  EXPECT_TRUE(back.u_onsite.isApprox(m.u_onsite, 0.0));
  EXPECT_TRUE(back.t_onsite.isApprox(m.t_onsite, 0.0));
  EXPECT_EQ(back.direction_scale, m.direction_scale);
}

TEST(ModelTransforms, WithLatticeRescalesFilling) {
  const auto m = load_model(testing::material_path("srvo3"));
  const auto small = with_lattice(m, 2, 2);
  EXPECT_EQ(small.filling, (std::vector<int>{4, 0, 0}));
  const auto quarter = testing::chain(4, -1.0, 1.0, 0.0, 2);
  EXPECT_THROW(with_lattice(quarter, 3, 1), ValidationError);
}

TEST(CountTerms, PublishedTotals) {
  EXPECT_EQ(count_terms(10, 1, 1, true).total, 37);
  const auto ca = count_terms(10, 1, 1, true);
  EXPECT_EQ(ca.hop_intra, 18);
  EXPECT_EQ(ca.u_onsite, 10);
  EXPECT_EQ(ca.v_offsite, 9);
  EXPECT_EQ(count_terms(10, 1, 1, false).total, 57);
  EXPECT_EQ(count_terms(3, 3, 3, false).total, 423);
  const auto w = count_terms(2, 2, 4, false);
  EXPECT_EQ(w.total, 288);
  EXPECT_EQ(w.breakdown_sum(), 288);
}

TEST(CountTerms, BreakdownAndExpansionAgreeOnSweep) {
  std::mt19937_64 rng(11);
  for (int nx = 1; nx <= 6; ++nx)
    for (int ny = 1; ny <= 6; ++ny)
      for (int nb = 1; nb <= 5; ++nb)
        for (bool drop : {false, true}) {
          const auto c = count_terms(nx, ny, nb, drop);
          ASSERT_EQ(c.breakdown_sum(), c.total) << nx << "x" << ny << "x" << nb;
          auto m = testing::random_model(rng, nx, ny, nb);
          const auto policy = drop ? OnsitePotentialPolicy::drop : OnsitePotentialPolicy::keep;
          ASSERT_EQ(static_cast<std::int64_t>(expand_terms(m, policy).size()), c.total);
        }
}

TEST(CountTerms, RejectsNonPositiveAndOverflow) {
  EXPECT_THROW(count_terms(0, 1, 1, false), ValidationError);
  EXPECT_THROW(count_terms(1LL << 40, 1LL << 40, 1LL << 20, false), std::overflow_error);
  EXPECT_THROW(count_full_terms(1LL << 20, 1, 1), std::overflow_error);
}

TEST(ExpandTerms, SmallestLattice) {
  auto m = testing::chain(1, -1.0, 2.0, 0.0, 1);
  const auto terms = expand_terms(m, OnsitePotentialPolicy::keep);
  std::map<TermKind, int> by_kind;
  for (const auto& t : terms) ++by_kind[t.kind];
  EXPECT_EQ(by_kind[TermKind::u_onsite], 1);
  EXPECT_EQ(by_kind[TermKind::onsite_potential], 2);  // one per spin
  EXPECT_EQ(by_kind[TermKind::hop_intra], 0);
}

TEST(ExpandTerms, NoInterSiteInterBandHopping) {
  const auto m = load_model(testing::material_path("wte2"));
  for (const auto& t : expand_terms(m)) {
    if (t.kind == TermKind::hop_intra) {
      EXPECT_EQ(t.band_i, t.band_j);
    }
    if (t.site_i != t.site_j) {
      EXPECT_TRUE(t.kind == TermKind::hop_intra || t.kind == TermKind::v_offsite);
    }
    EXPECT_TRUE(std::isfinite(t.coefficient));
  }
  EXPECT_EQ(expand_terms(m).size(), 288U);
}

TEST(ExpandTerms, CoefficientMultisetInvariantUnderReflection) {
  std::mt19937_64 rng(5);
  auto m = testing::random_model(rng, 4, 3, 2);
  m.v_offsite = 0.5 * (m.v_offsite + m.v_offsite.transpose()).eval();
  const auto terms = expand_terms(m);
  const auto& lat = m.lattice;
  auto reflect = [&](int s) { return lat.site(lat.nx - 1 - lat.x_of(s), lat.y_of(s)); };
  using Key = std::tuple<TermKind, int, int, int, int, SpinPattern, double>;
  auto key = [](HubbardTerm t) {
    if (t.site_i > t.site_j) {
      std::swap(t.site_i, t.site_j);
      std::swap(t.band_i, t.band_j);
    }
    return Key{t.kind, t.band_i, t.band_j, t.site_i, t.site_j, t.spin, t.coefficient};
  };
  std::multiset<Key> original, mirrored;
  for (const auto& t : terms) {
    original.insert(key(t));
    auto u = t;
    u.site_i = reflect(t.site_i);
    u.site_j = reflect(t.site_j);
    mirrored.insert(key(u));
  }
  EXPECT_EQ(original, mirrored);
}

TEST(FullTerms, PublishedMagnitudes) {
  EXPECT_EQ(count_full_terms(10, 1, 1), 40200);
  EXPECT_EQ(count_full_terms(2, 2, 4), 262656);
  EXPECT_EQ(count_full_terms(3, 3, 3), 2127222);
  // Back-solved active-space sizes of the full downfolding windows.
  EXPECT_NEAR(count_full_terms(10, 1, 29) / 1e10, 2.83, 0.005);
  EXPECT_NEAR(count_full_terms(2, 2, 28) / 1e8, 6.29, 0.005);
  EXPECT_NEAR(count_full_terms(3, 3, 23) / 1e9, 7.34, 0.005);
}

TEST(CompressionRatio, Values) {
  EXPECT_DOUBLE_EQ(compression_ratio(10, 1, 1, 1).exact, 57.0 / 40200.0);
  EXPECT_DOUBLE_EQ(compression_ratio(1, 1, 1, 1).exact, 0.5);
  EXPECT_NEAR(compression_ratio(2, 2, 4, 28).exact, 288.0 / 629432832.0, 1e-18);
  EXPECT_NEAR(compression_ratio(2, 2, 4, 28).exact / 1e-7, 4.58, 0.01);
  double prev = 1.0;
  for (int nbf = 1; nbf <= 40; ++nbf) {
    const double r = compression_ratio(3, 3, 3, nbf).exact;
    EXPECT_LT(r, prev);
    prev = r;
  }
}

TEST(OneNorm, HandExpandedTwoSite) {
  // |t~| = 1 per ordered site pair: 2; U/|t| = 4 on two sites, halved: 4;
  // V/|t| = 1 per ordered pair, two pairs, halved: 1.
  const auto m = testing::chain(2, -0.5, 2.0, 0.5, 2);
  EXPECT_NEAR(one_norm(m), 7.0, 1e-12);
}

TEST(OneNorm, UnitHoppingCountsEntries) {
  const auto m = testing::chain(6, -0.3, 0.0, 0.0, 6);
  EXPECT_NEAR(one_norm(m), 10.0, 1e-12);  // 5 bonds, both orders
}

TEST(OneNorm, InvariantUnderSignAndScale) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto m = testing::random_model(rng, 3, 2, 2);
    const double ref = one_norm(m);
    auto flipped = m;
    flipped.t_intra *= -1.0;
    flipped.t_onsite *= -1.0;
    EXPECT_NEAR(one_norm(flipped), ref, 1e-12 * ref);
    auto scaled = m;
    for (auto* mat : {&scaled.t_intra, &scaled.t_onsite, &scaled.u_onsite, &scaled.v_offsite})
      *mat *= 3.7;
    EXPECT_NEAR(one_norm(scaled), ref, 1e-12 * ref);
  }
}

TEST(OneNorm, BundledMaterialsBelowAllNeighbourValues) {
  const double ca = one_norm(load_model(testing::material_path("ca2cuo3")));
  const double wte = one_norm(load_model(testing::material_path("wte2")));
  const double srv = one_norm(load_model(testing::material_path("srvo3")));
  EXPECT_GT(ca, 0.0);
  EXPECT_LE(ca, 267.0);
  EXPECT_GT(wte, 0.0);
  EXPECT_LE(wte, 331.0);
  EXPECT_GT(srv, 0.0);
  EXPECT_LE(srv, 2315.0);
}

TEST(OneNorm, ZeroHoppingThrows) {
  const auto m = testing::chain(3, 0.0, 1.0, 0.0, 3);
  EXPECT_THROW(one_norm(m), NumericalError);
}

}  // namespace
}  // namespace dfvqe
