// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "dfvqe/core/error.hpp"
#include "dfvqe/dmrg/dmrg.hpp"
#include "dfvqe/observables/observables.hpp"
#include "support.hpp"

namespace dfvqe {
namespace {

Eigen::VectorXcd embed(const FockBasis& basis, const Eigen::VectorXd& v) {
  Eigen::VectorXcd dense = Eigen::VectorXcd::Zero(Eigen::Index{1} << basis.num_qubits());
  for (Eigen::Index i = 0; i < v.size(); ++i) dense(static_cast<Eigen::Index>(basis.state(i))) = v(i);
  return dense;
}

// Dense state with the listed qubits occupied.
Eigen::VectorXcd basis_state(int num_qubits, std::initializer_list<int> occupied) {
  std::uint64_t s = 0;
  for (int q : occupied) s |= std::uint64_t{1} << q;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << num_qubits);
  v(static_cast<Eigen::Index>(s)) = 1.0;
  return v;
}

// Kronecker product of per-site vectors, site 0 on the lowest qubits.
Eigen::VectorXcd product(const std::vector<Eigen::VectorXcd>& sites) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Ones(1);
  for (const auto& s : sites) {
    Eigen::VectorXcd next(out.size() * s.size());
    for (Eigen::Index hi = 0; hi < s.size(); ++hi) next.segment(hi * out.size(), out.size()) = s(hi) * out;
    out = next;
  }
  return out;
}

ExtendedHubbardModel two_band_model(int nx, int ny) {
  ExtendedHubbardModel m;
  m.name = "two-band";
  m.lattice = {nx, ny};
  m.bands = 2;
  m.t_intra = Eigen::Vector2d(-0.4, 0.3).asDiagonal();
  m.t_onsite = Eigen::Matrix2d{{0.5, 0.0}, {0.0, -0.2}};
  m.u_onsite = Eigen::Matrix2d{{2.0, 1.2}, {1.2, 1.5}};
  m.v_offsite = Eigen::Matrix2d{{0.4, 0.3}, {0.3, 0.2}};
  m.filling = {0, 2 * nx * ny};
  return m;
}

void expect_reports_near(const ObservableReport& a, const ObservableReport& b, double tol) {
  ASSERT_EQ(a.spin_correlations.size(), b.spin_correlations.size());
  for (std::size_t j = 0; j < a.spin_correlations.size(); ++j) {
    EXPECT_NEAR(a.spin_correlations[j], b.spin_correlations[j], tol);
    EXPECT_NEAR(a.spin_z[j], b.spin_z[j], tol);
  }
  ASSERT_EQ(a.bands.size(), b.bands.size());
  for (std::size_t k = 0; k < a.bands.size(); ++k) {
    EXPECT_NEAR(a.bands[k].up, b.bands[k].up, tol);
    EXPECT_NEAR(a.bands[k].down, b.bands[k].down, tol);
  }
  EXPECT_NEAR(std::abs(a.excitonic.coherence - b.excitonic.coherence), 0.0, tol);
  EXPECT_NEAR(a.excitonic.delta, b.excitonic.delta, tol);
  EXPECT_NEAR(a.charge.phi, b.charge.phi, tol);
}

TEST(Observables, AllStateViewsAgree) {
  std::mt19937_64 rng(11);
  const auto model = testing::random_model(rng, 2, 1, 2);
  const auto ordering = build_ordering(model);
  const auto ed = ed_ground_state(model, model.num_electrons());
  const Eigen::VectorXcd dense = embed(ed.basis, ed.amplitudes);
  const SectorState sector{ed.basis, ed.amplitudes.cast<cx>()};
  const auto mps_real =
      MatrixProductState<double>::from_dense(embed(ed.basis, ed.amplitudes).real(), 8);
  const auto mps_cx = MatrixProductState<cx>::from_dense(dense, 8);

  const auto ref = observe(dense, model, ordering);
  expect_reports_near(ref, observe(sector, model, ordering), 1e-10);
  expect_reports_near(ref, observe(mps_real, model, ordering), 1e-8);
  expect_reports_near(ref, observe(mps_cx, model, ordering), 1e-8);
}

TEST(Observables, MatchesFermionicExpectations) {
  std::mt19937_64 rng(5);
  const auto model = testing::random_model(rng, 3, 1, 1);
  const auto ordering = build_ordering(model);
  const auto ed = ed_ground_state(model, model.num_electrons());
  const SectorState sector{ed.basis, ed.amplitudes.cast<cx>()};
  const int n = model.num_spin_orbitals();
  auto n_of = [&](int site, Spin s) { return number_op(n, ordering.qubit(site, 0, s)); };
  for (int i = 0; i < 3; ++i) {
    const double up = std::real(ed_expectation(ed.basis, ed.amplitudes, n_of(i, Spin::up)));
    const double dn = std::real(ed_expectation(ed.basis, ed.amplitudes, n_of(i, Spin::down)));
    EXPECT_NEAR(spin_z(sector, ordering, i), 0.5 * (up - dn), 1e-12);
    EXPECT_NEAR(StateView(sector).occupation(ordering.qubit(i, 0, Spin::up)), up, 1e-12);
  }
}

TEST(Observables, CorrelatorIsSymmetric) {
  const auto model = testing::chain(4, -1.0, 4.0, 0.5, 4);
  const auto ordering = build_ordering(model);
  const auto ed = ed_ground_state(model, 4);
  const SectorState psi{ed.basis, ed.amplitudes.cast<cx>()};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      EXPECT_NEAR(spin_correlation(psi, ordering, i, j), spin_correlation(psi, ordering, j, i),
                  1e-13);
}

TEST(Observables, RowSumsVanishForSzEigenstates) {
  const auto model = testing::chain(4, -1.0, 4.0, 0.5, 4);
  const auto ordering = build_ordering(model);
  const auto ed = ed_ground_state(model, 4);
  const SectorState psi{ed.basis, ed.amplitudes.cast<cx>()};
  for (int i = 0; i < 4; ++i) {
    const auto row = spin_correlation_row(psi, ordering, i);
    double sum = 0.0;
    for (double c : row) sum += c;
    EXPECT_NEAR(sum, 0.0, 1e-12);
  }
}

TEST(Observables, TwoSiteHubbardIsAntiferromagnetic) {
  const auto model = testing::chain(2, -1.0, 4.0, 0.0, 2);
  const auto ordering = build_ordering(model);
  const auto ed = ed_ground_state(model, 2);
  const SectorState psi{ed.basis, ed.amplitudes.cast<cx>()};
  const double c00 = spin_correlation(psi, ordering, 0, 0);
  const double c01 = spin_correlation(psi, ordering, 0, 1);
  EXPECT_LT(c01, 0.0);
  EXPECT_NEAR(c01, -c00, 1e-13);
  // singlet in {covalent, ionic}: H = [[0, -2|t|], [-2|t|, U]], <S^z_0^2> = P(covalent) / 4
  const double u = 4.0, t = 1.0;
  const double e = 0.5 * (u - std::sqrt(u * u + 16.0 * t * t));
  const double r = 2.0 * t / (e - u);  // ionic / covalent amplitude
  const double p_single = 1.0 / (1.0 + r * r);
  EXPECT_NEAR(c00, 0.25 * p_single, 1e-12);
}

TEST(Observables, SignAlternation) {
  EXPECT_TRUE(signs_alternate({0.25, -0.1, 0.05, -0.02}));
  EXPECT_FALSE(signs_alternate({0.25, 0.1, -0.05}));
  EXPECT_FALSE(signs_alternate({0.25, -0.1, -0.05}));
  EXPECT_FALSE(signs_alternate({0.25, -0.1, 0.0}));
  EXPECT_TRUE(signs_alternate({0.25, 0.3, -0.1, 0.2}, 2));
  EXPECT_FALSE(signs_alternate({0.25}));
}

TEST(Observables, ProductStateCorrelations) {
  const auto model = testing::chain(3, -1.0, 1.0, 0.0, 3);
  const auto ordering = build_ordering(model);
  ASSERT_EQ(ordering.qubit(0, 0, Spin::up), 0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d;
  std::vector<Eigen::VectorXcd> sites;
  std::vector<double> sz;
  for (int s = 0; s < 3; ++s) {
    Eigen::VectorXcd local = Eigen::VectorXcd::Zero(4);  // |up> = bit 0, |dn> = bit 1
    local(1) = cx(d(rng), d(rng));
    local(2) = cx(d(rng), d(rng));
    local.normalize();
    sites.push_back(local);
    sz.push_back(0.5 * (std::norm(local(1)) - std::norm(local(2))));
  }
  // snake order on a chain is the identity, so site s owns qubits 2s, 2s + 1
  const Eigen::VectorXcd psi = product(sites);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(spin_z(psi, ordering, i), sz[i], 1e-13);
    for (int j = 0; j < 3; ++j) {
      const double expected = i == j ? 0.25 - sz[i] * sz[i] : 0.0;
      EXPECT_NEAR(spin_correlation(psi, ordering, i, j), expected, 1e-13);
    }
  }
}

TEST(Observables, InvariantUnderScaleAndGlobalPhase) {
  std::mt19937_64 rng(2);
  const auto model = testing::random_model(rng, 2, 1, 2);
  const auto ordering = build_ordering(model);
  const auto ed = ed_ground_state(model, model.num_electrons());
  const Eigen::VectorXcd dense = embed(ed.basis, ed.amplitudes);
  const Eigen::VectorXcd rotated = 3.0 * std::polar(1.0, 0.7) * dense;
  expect_reports_near(observe(dense, model, ordering), observe(rotated, model, ordering), 1e-12);
}

TEST(Observables, BandInsulatorHasNoHolesOrCoherence) {
  const auto model = two_band_model(2, 2);
  const auto ordering = build_ordering(model);
  const auto psi = MatrixProductState<double>::product_state(filling_bits(model, ordering));
  const auto report = observe(psi, model, ordering);
  double total = 0.0;
  for (const auto& b : report.bands) {
    EXPECT_NEAR(b.delta_n_el(), 0.0, 1e-12);
    total += b.total();
  }
  EXPECT_NEAR(total, model.num_electrons(), 1e-12);
  EXPECT_NEAR(std::abs(report.excitonic.coherence), 0.0, 1e-14);
  EXPECT_NEAR(report.excitonic.delta, 0.0, 1e-14);
}

TEST(Observables, OccupationsSumToElectronCount) {
  std::mt19937_64 rng(9);
  const auto model = testing::random_model(rng, 2, 1, 2);
  const auto ordering = build_ordering(model);
  const auto ed = ed_ground_state(model, model.num_electrons());
  const SectorState psi{ed.basis, ed.amplitudes.cast<cx>()};
  double total = 0.0;
  for (const auto& b : band_occupations(psi, model, ordering)) total += b.total();
  EXPECT_NEAR(total, model.num_electrons(), 1e-12);
}

TEST(Observables, ExcitonicCoherenceOfBondingOrbital) {
  auto model = two_band_model(2, 1);
  model.filling = {0, 2};
  const auto ordering = build_ordering(model);
  const auto split = default_band_split(model);
  ASSERT_EQ(split.valence, std::vector<int>{1});
  ASSERT_EQ(split.conduction, std::vector<int>{0});
  // one spin-up electron per site in (|v> + e^{i phi}|c>) / sqrt(2)
  const double phi = 0.4;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(Eigen::Index{1} << 8);
  for (int a : {0, 1})
    for (int b : {0, 1}) {
      const int qa = ordering.qubit(0, a, Spin::up), qb = ordering.qubit(1, b, Spin::up);
      const cx amp = (a == 0 ? std::polar(1.0, phi) : cx(1.0)) *
                     (b == 0 ? std::polar(1.0, phi) : cx(1.0)) * 0.5;
      psi((Eigen::Index{1} << qa) | (Eigen::Index{1} << qb)) = amp;
    }
  const auto order = ei_order_parameter(psi, model, ordering, split);
  // <c+_c c_v> = conj(a_c) a_v per site, with no sign from the empty orbitals in between
  EXPECT_NEAR(std::abs(order.coherence - 2.0 * 0.5 * std::polar(1.0, -phi)), 0.0, 1e-13);
  EXPECT_DOUBLE_EQ(order.u_prime, 1.2);
  EXPECT_NEAR(order.delta, 1.0 * 1.2 / 2.0, 1e-13);
}

TEST(Observables, BandSplitFollowsOnsiteEnergyThenIndex) {
  const auto model = two_band_model(1, 1);
  auto split = default_band_split(model);
  EXPECT_EQ(split.valence, std::vector<int>{1});
  EXPECT_EQ(split.conduction, std::vector<int>{0});

  const auto wte2 = load_model(testing::material_path("wte2"));
  split = default_band_split(wte2);
  EXPECT_EQ(split.valence, (std::vector<int>{0, 1}));
  EXPECT_EQ(split.conduction, (std::vector<int>{2, 3}));
  const double vc = (0.922 + 0.765 + 0.760 + 0.684) / 4.0;
  EXPECT_NEAR(mean_interband_repulsion(wte2, split), vc, 1e-15);
  const double all = 2.0 * (0.822 + 0.922 + 0.765 + 0.760 + 0.684 + 0.853) / 12.0;
  EXPECT_NEAR(mean_interband_repulsion(wte2, split, UPrimeAveraging::all_pairs), all, 1e-15);
}

TEST(Observables, ChargeDisproportionation) {
  const auto model = testing::chain(4, -1.0, 2.0, 1.0, 4);
  const auto ordering = build_ordering(model);
  // doublons on the even sublattice
  const auto cdw = basis_state(8, {ordering.qubit(0, 0, Spin::up), ordering.qubit(0, 0, Spin::down),
                                   ordering.qubit(2, 0, Spin::up), ordering.qubit(2, 0, Spin::down)});
  const auto order = charge_disproportionation(cdw, model, ordering);
  EXPECT_DOUBLE_EQ(order.sublattice_a, 4.0);
  EXPECT_DOUBLE_EQ(order.sublattice_b, 0.0);
  EXPECT_DOUBLE_EQ(order.phi, 1.0);

  // the reflection 0 <-> 3, 1 <-> 2 swaps sublattices and fixes the ground state
  const auto ed = ed_ground_state(model, 4);
  const SectorState psi{ed.basis, ed.amplitudes.cast<cx>()};
  EXPECT_NEAR(charge_disproportionation(psi, model, ordering).phi, 0.0, 1e-12);
}

TEST(Observables, RejectsBadInput) {
  const auto model = testing::chain(2, -1.0, 1.0, 0.0, 2);
  const auto ordering = build_ordering(model);
  const Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(16);
  EXPECT_THROW(StateView{zero}, NumericalError);
  const Eigen::VectorXcd odd = Eigen::VectorXcd::Ones(12);
  EXPECT_THROW(StateView{odd}, DimensionError);
  const auto psi = basis_state(4, {0, 3});
  EXPECT_THROW(spin_z(psi, ordering, 2), DimensionError);
  EXPECT_THROW(spin_correlation(psi, ordering, 0, 1, 1), DimensionError);
  EXPECT_THROW(StateView(psi).expectation(single_pauli(5, 'Z')), DimensionError);
  const auto big = testing::chain(3, -1.0, 1.0, 0.0, 3);
  EXPECT_THROW(observe(psi, big, build_ordering(big)), DimensionError);
  EXPECT_THROW(ei_order_parameter(psi, model, ordering, default_band_split(model)),
               ValidationError);
  EXPECT_THROW(parse_uprime_averaging("median"), ValidationError);
  EXPECT_EQ(parse_uprime_averaging("ALL"), UPrimeAveraging::all_pairs);
}

}  // namespace
}  // namespace dfvqe
