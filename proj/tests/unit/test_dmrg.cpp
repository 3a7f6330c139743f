// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dfvqe/core/error.hpp"
#include "dfvqe/dmrg/dmrg.hpp"
#include "dfvqe/ed/ed.hpp"
#include "dfvqe/encode/jordan_wigner.hpp"
#include "support.hpp"

namespace dfvqe {
namespace {

double relative(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

DmrgConfig small_config() {
  DmrgConfig c;
  c.chi_schedule = {64};
  c.noise_schedule = {1e-4, 1e-6, 0.0};
  c.energy_convergence = 1e-11;
  c.lanczos.tolerance = 1e-12;
  return c;
}

TEST(Dmrg, TwoSiteAnalytic) {
  const auto m = testing::chain(2, -0.491, 3.578, 0.903, 2);
  const auto r = dmrg_ground_state(m, build_ordering(m), small_config());
  EXPECT_NEAR(r.energy, 0.58121, 1e-5);
  EXPECT_NEAR(r.energy, ed_ground_state(m, 2).energy, 1e-10);
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(r.penalty_satisfied);
  EXPECT_NEAR(r.state.norm(), 1.0, 1e-10);
}

TEST(Dmrg, FreeFermionChain) {
  const int length = 4;
  const auto m = testing::chain(length, -1.0, 0.0, 0.0, 2);
  const auto r = dmrg_ground_state(m, build_ordering(m), small_config());
  EXPECT_NEAR(r.energy, -4.0 * std::cos(M_PI / (length + 1)), 1e-9);
}

TEST(Dmrg, MatchesEdOnMaterialSubLattices) {
  const auto ca = load_model(testing::material_path("ca2cuo3"));
  for (int length = 2; length <= 6; ++length) {
    const auto m = with_lattice(ca, length, 1);
    const double ed = ed_ground_state(m, m.num_electrons()).energy;
    const auto r = dmrg_ground_state(m, build_ordering(m), small_config());
    EXPECT_LT(relative(r.energy, ed), 1e-8) << "length " << length;
  }
  const auto wte2 = with_lattice(load_model(testing::material_path("wte2")), 1, 1);
  const double ed = ed_ground_state(wte2, wte2.num_electrons()).energy;
  const auto r = dmrg_ground_state(wte2, build_ordering(wte2), small_config());
  EXPECT_LT(relative(r.energy, ed), 1e-8);
}

TEST(Dmrg, MatchesEdOnRandomModels) {
  std::mt19937_64 rng(11);
  for (auto [nx, ny, nb] : {std::tuple{2, 1, 2}, std::tuple{3, 2, 1}, std::tuple{2, 2, 1}}) {
    const auto m = testing::random_model(rng, nx, ny, nb);
    const double ed = ed_ground_state(m, m.num_electrons()).energy;
    const auto r = dmrg_ground_state(m, build_ordering(m), small_config());
    EXPECT_LT(relative(r.energy, ed), 1e-8) << nx << "x" << ny << "x" << nb;
  }
}

TEST(Dmrg, OrderingInvariant) {
  std::mt19937_64 rng(12);
  const auto m = testing::random_model(rng, 3, 1, 2);
  const auto a = dmrg_ground_state(m, build_ordering(m, SpinScheme::spin_interleaved), small_config());
  const auto b = dmrg_ground_state(m, build_ordering(m, SpinScheme::spin_blocked), small_config());
  EXPECT_LT(relative(a.energy, b.energy), 1e-8);
}

TEST(Dmrg, VariationalBoundOverProductStates) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 3; ++trial) {
    const auto m = testing::random_model(rng, 2, 2, 1);
    const auto o = build_ordering(m);
    const auto h = assemble_mpo<double>(qubit_hamiltonian(m, o));
    const auto r = dmrg_ground_state(m, o, small_config());
    const int n = o.num_qubits(), ne = m.num_electrons();
    FockBasis basis(n, ne);
    for (Eigen::Index i = 0; i < basis.dimension(); ++i) {
      std::vector<int> bits(static_cast<std::size_t>(n));
      for (int q = 0; q < n; ++q) bits[static_cast<std::size_t>(q)] = (basis.state(i) >> q) & 1U;
      const double e = expectation_real(MatrixProductState<double>::product_state(bits), h);
      EXPECT_LE(r.energy, e + 1e-10);
    }
  }
}

TEST(Dmrg, MonotoneOnceNoiseOff) {
  std::mt19937_64 rng(14);
  const auto m = testing::random_model(rng, 3, 2, 1);
  DmrgConfig c = small_config();
  c.chi_schedule = {8};
  c.noise_schedule = {1e-3, 0.0};
  c.energy_convergence = 1e-14;
  c.max_sweeps = 8;
  const auto r = dmrg_ground_state(m, build_ordering(m), c);
  ASSERT_GE(r.trace.size(), 3U);
  for (std::size_t s = 2; s < r.trace.size(); ++s)
    EXPECT_LE(r.trace[s].energy, r.trace[s - 1].energy + 1e-9) << "sweep " << s;
  for (const auto& rec : r.trace) EXPECT_LE(rec.max_bond_dim, 8);
}

TEST(Dmrg, FlagsNonConvergence) {
  const auto m = testing::chain(6, -1.0, 2.0, 0.5, 6);
  DmrgConfig c;
  c.chi_schedule = {4};
  c.noise_schedule = {1e-4};
  c.max_sweeps = 2;
  const auto r = dmrg_ground_state(m, build_ordering(m), c);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.trace.size(), 2U);
  EXPECT_NEAR(r.state.norm(), 1.0, 1e-10);
}

TEST(Noninteracting, TwoSiteBondingOrbital) {
  const auto m = testing::chain(2, -0.491, 3.578, 0.903, 2);
  const auto r = noninteracting_ground_state(m, m.filling, build_ordering(m), small_config());
  EXPECT_NEAR(r.energy, 2 * -0.491, 1e-10);
}

TEST(Noninteracting, ZeroHoppingGivesOnsiteSum) {
  auto m = testing::chain(2, 0.0, 1.0, 0.5, 2);
  m.bands = 2;
  m.t_intra = Eigen::MatrixXd::Zero(2, 2);
  m.t_onsite = Eigen::Vector2d(0.3, -0.2).asDiagonal();
  m.u_onsite = Eigen::MatrixXd::Constant(2, 2, 1.0);
  m.v_offsite = Eigen::MatrixXd::Constant(2, 2, 0.5);
  m.filling = {3, 1};
  const auto r = noninteracting_ground_state(m, m.filling, build_ordering(m), small_config());
  EXPECT_NEAR(r.energy, 3 * 0.3 + 1 * -0.2, 1e-10);
}

TEST(Noninteracting, BandFillingsPinned) {
  const auto w = with_lattice(load_model(testing::material_path("wte2")), 1, 1);
  const auto o = build_ordering(w);
  const auto r = noninteracting_ground_state(w, w.filling, o, small_config());
  for (int b = 0; b < w.bands; ++b) {
    const auto nb = assemble_mpo<double>(number_operator(o.num_qubits(), o.band_qubits(b)));
    EXPECT_NEAR(expectation_real(r.state, nb), w.filling[static_cast<std::size_t>(b)], 1e-6);
  }
}

TEST(DmrgConfig, Validation) {
  DmrgConfig c;
  c.chi_schedule.clear();
  EXPECT_THROW(c.validate(), ValidationError);
  c = {};
  c.noise_schedule = {-1.0};
  EXPECT_THROW(c.validate(), ValidationError);
  c = {};
  c.penalties.push_back({{}, 2, -1.0});
  EXPECT_THROW(c.validate(), ValidationError);
  EXPECT_EQ(default_chi_schedule(512), (std::vector<int>{32, 64, 128, 256, 512}));
  EXPECT_EQ(default_chi_schedule(16), (std::vector<int>{16}));
  EXPECT_DOUBLE_EQ(default_penalty_weight(testing::chain(2, -0.5, 3.0, 1.0, 2)), 30.0);
  EXPECT_DOUBLE_EQ(default_penalty_weight(testing::chain(2, -0.5, 0.0, 0.0, 2)), 5.0);
}

TEST(FillingBits, AlternatingSpinsAndDoubles) {
  const auto m = testing::chain(4, -1.0, 1.0, 0.0, 6);
  const auto o = build_ordering(m);
  const auto bits = filling_bits(m, o);
  int total = 0;
  for (int b : bits) total += b;
  EXPECT_EQ(total, 6);
  EXPECT_EQ(bits[static_cast<std::size_t>(o.qubit(0, 0, Spin::up))], 1);
  EXPECT_EQ(bits[static_cast<std::size_t>(o.qubit(0, 0, Spin::down))], 1);
  EXPECT_EQ(bits[static_cast<std::size_t>(o.qubit(3, 0, Spin::down))], 1);
}

}  // namespace
}  // namespace dfvqe
