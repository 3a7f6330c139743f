// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <random>
#include <string>

#include "dfvqe/model/model.hpp"

namespace dfvqe::testing {

inline std::string material_path(const std::string& name) {
  return std::string(DFVQE_DATA_DIR) + "/" + name + ".json";
}

inline ExtendedHubbardModel chain(int length, double t, double u, double v, int electrons) {
  ExtendedHubbardModel m;
  m.name = "chain";
  m.lattice = {length, 1};
  m.bands = 1;
  m.t_intra = Eigen::MatrixXd::Constant(1, 1, t);
  m.t_onsite = Eigen::MatrixXd::Zero(1, 1);
  m.u_onsite = Eigen::MatrixXd::Constant(1, 1, u);
  m.v_offsite = Eigen::MatrixXd::Constant(1, 1, v);
  m.filling = {electrons};
  return m;
}

/// Random valid model with every coupling class populated, including
/// on-site potentials and same-site inter-band hopping.
inline ExtendedHubbardModel random_model(std::mt19937_64& rng, int nx, int ny, int bands) {
  std::uniform_real_distribution<double> hop(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.0, 2.0);
  ExtendedHubbardModel m;
  m.name = "random";
  m.lattice = {nx, ny};
  m.bands = bands;
  m.t_intra = Eigen::MatrixXd::Zero(bands, bands);
  m.t_onsite = Eigen::MatrixXd::Zero(bands, bands);
  m.u_onsite = Eigen::MatrixXd::Zero(bands, bands);
  m.v_offsite = Eigen::MatrixXd::Zero(bands, bands);
  for (int i = 0; i < bands; ++i) {
    m.t_intra(i, i) = hop(rng);
    m.u_onsite(i, i) = pos(rng);
    for (int j = 0; j < bands; ++j) {
      m.v_offsite(i, j) = 0.5 * pos(rng);
      if (j > i) {
        m.u_onsite(i, j) = m.u_onsite(j, i) = 0.5 * pos(rng);
        m.t_onsite(i, j) = m.t_onsite(j, i) = 0.3 * hop(rng);
      }
    }
    m.t_onsite(i, i) = 0.5 * hop(rng);
  }
  m.filling.assign(static_cast<std::size_t>(bands), 0);
  m.filling[0] = nx * ny;
  m.direction_scale = {1.0, ny > 1 ? 0.7 : 1.0};
  return m;
}

}  // namespace dfvqe::testing
