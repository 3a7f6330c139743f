// Copyright 2026 The dfvqe Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfvqe/model/model.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "dfvqe/core/error.hpp"

namespace dfvqe {

ParseError::ParseError(const std::string& message, std::size_t line, std::string field)
    : Error(line > 0 ? fmt::format("line {}: {}: {}", line, field, message)
                     : fmt::format("{}: {}", field, message)),
      line_(line),
      field_(std::move(field)) {}

int ExtendedHubbardModel::num_electrons() const {
  return std::accumulate(filling.begin(), filling.end(), 0);
}

namespace {

void check_matrix(const Eigen::MatrixXd& m, const char* field, int bands) {
  if (m.rows() != bands || m.cols() != bands)
    throw ValidationError(fmt::format("{}: expected a {}x{} matrix for {} band(s), got {}x{}",
                                      field, bands, bands, bands, m.rows(), m.cols()));
  if (!m.allFinite()) throw ValidationError(fmt::format("{}: entries must be finite", field));
}

bool symmetric(const Eigen::MatrixXd& m) { return (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12; }

}  // namespace

void ExtendedHubbardModel::validate() const {
  lattice.validate();
  if (bands < 1) throw ValidationError(fmt::format("bands: must be >= 1 (got {})", bands));
  check_matrix(t_intra, "t_intra", bands);
  check_matrix(t_onsite, "t_onsite", bands);
  check_matrix(u_onsite, "u_onsite", bands);
  check_matrix(v_offsite, "v_offsite", bands);
  for (int i = 0; i < bands; ++i)
    if (u_onsite(i, i) < 0.0)
      throw ValidationError(
          fmt::format("u_onsite: diagonal entry [{}][{}] = {} is negative", i, i, u_onsite(i, i)));
  if (!symmetric(u_onsite)) throw ValidationError("u_onsite: matrix must be symmetric");
  if (!symmetric(t_onsite))
    throw ValidationError("t_onsite: matrix must be symmetric for a hermitian Hamiltonian");
  if (static_cast<int>(filling.size()) != bands)
    throw ValidationError(
        fmt::format("filling: expected {} entries, got {}", bands, filling.size()));
  const int max_per_band = 2 * lattice.num_sites();
  for (std::size_t b = 0; b < filling.size(); ++b)
    if (filling[b] < 0 || filling[b] > max_per_band)
      throw ValidationError(fmt::format("filling: entry {} = {} outside [0, {}]", b, filling[b],
                                        max_per_band));
  for (double s : direction_scale)
    if (!std::isfinite(s)) throw ValidationError("anisotropy: scales must be finite");
}

ExtendedHubbardModel with_lattice(const ExtendedHubbardModel& model, int nx, int ny) {
  ExtendedHubbardModel out = model;
  out.lattice.nx = nx;
  out.lattice.ny = ny;
  out.lattice.validate();
  const long long old_sites = model.lattice.num_sites();
  const long long new_sites = out.lattice.num_sites();
  for (std::size_t b = 0; b < out.filling.size(); ++b) {
    const long long scaled = static_cast<long long>(model.filling[b]) * new_sites;
    if (scaled % old_sites != 0)
      throw ValidationError(fmt::format(
          "filling: band {} density {}/{} is not integral on a {}x{} lattice", b,
          model.filling[b], old_sites, nx, ny));
    out.filling[b] = static_cast<int>(scaled / old_sites);
  }
  out.validate();
  return out;
}

ExtendedHubbardModel noninteracting(const ExtendedHubbardModel& model) {
  ExtendedHubbardModel out = model;
  out.u_onsite.setZero();
  out.v_offsite.setZero();
  return out;
}

ExtendedHubbardModel with_bands(const ExtendedHubbardModel& model, int bands) {
  if (bands < 1 || bands > model.bands)
    throw ValidationError(fmt::format("bands: cannot keep {} of {} bands", bands, model.bands));
  ExtendedHubbardModel out = model;
  out.bands = bands;
  out.t_intra = model.t_intra.topLeftCorner(bands, bands);
  out.t_onsite = model.t_onsite.topLeftCorner(bands, bands);
  out.u_onsite = model.u_onsite.topLeftCorner(bands, bands);
  out.v_offsite = model.v_offsite.topLeftCorner(bands, bands);
  out.filling.resize(static_cast<std::size_t>(bands));
  out.validate();
  return out;
}

// ---------------------------------------------------------------------------
// Document format

namespace {

using nlohmann::json;

std::size_t line_at(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

std::size_t line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find('"' + key + '"');
  return pos == std::string::npos ? 0 : line_at(text, pos);
}

class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  [[noreturn]] void fail(const std::string& field, const std::string& message) const {
    const auto root = field.substr(0, field.find_first_of(".["));
    throw ParseError(message, line_of_key(text_, root), field);
  }

  const json& require(const json& obj, const std::string& key, const std::string& path) const {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing required field");
    return *it;
  }

  int integer(const json& v, const std::string& field) const {
    if (!v.is_number_integer()) fail(field, "expected an integer");
    return v.get<int>();
  }

  double number(const json& v, const std::string& field) const {
    if (!v.is_number()) fail(field, "expected a number");
    return v.get<double>();
  }

  Eigen::MatrixXd matrix(const json& v, const std::string& field) const {
    if (!v.is_array()) fail(field, "expected an array of rows");
    const auto rows = v.size();
    std::size_t cols = rows == 0 ? 0 : (v[0].is_array() ? v[0].size() : 0);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
      const auto row_field = fmt::format("{}[{}]", field, r);
      if (!v[r].is_array()) fail(row_field, "expected an array of numbers");
      if (v[r].size() != cols)
        throw ValidationError(fmt::format("{}: matrix is not square/rectangular (row {} has {} "
                                          "entries, row 0 has {})",
                                          field, r, v[r].size(), cols));
      for (std::size_t c = 0; c < cols; ++c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            number(v[r][c], fmt::format("{}[{}]", row_field, c));
    }
    return m;
  }

 private:
  const std::string& text_;
};

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

ExtendedHubbardModel parse_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), line_at(text, e.byte == 0 ? 0 : e.byte - 1), "<document>");
  }
  Reader rd(text);
  if (!doc.is_object()) rd.fail("<document>", "expected a top-level object");

  ExtendedHubbardModel m;
  if (auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) rd.fail("name", "expected a string");
    m.name = it->get<std::string>();
  }
  const json& lattice = rd.require(doc, "lattice", "");
  m.lattice.nx = rd.integer(rd.require(lattice, "nx", "lattice"), "lattice.nx");
  m.lattice.ny = rd.integer(rd.require(lattice, "ny", "lattice"), "lattice.ny");
  if (auto it = lattice.find("boundary"); it != lattice.end()) {
    if (!it->is_string() || it->get<std::string>() != "open")
      rd.fail("lattice.boundary", "only \"open\" boundaries are supported");
  }
  m.bands = rd.integer(rd.require(doc, "bands", ""), "bands");

  const json& filling = rd.require(doc, "filling", "");
  if (!filling.is_array()) rd.fail("filling", "expected an array of integers");
  for (std::size_t b = 0; b < filling.size(); ++b)
    m.filling.push_back(rd.integer(filling[b], fmt::format("filling[{}]", b)));

  m.t_intra = rd.matrix(rd.require(doc, "t_intra", ""), "t_intra");
  if (auto it = doc.find("t_onsite"); it != doc.end())
    m.t_onsite = rd.matrix(*it, "t_onsite");
  else
    m.t_onsite = Eigen::MatrixXd::Zero(std::max(m.bands, 0), std::max(m.bands, 0));
  m.u_onsite = rd.matrix(rd.require(doc, "u_onsite", ""), "u_onsite");
  m.v_offsite = rd.matrix(rd.require(doc, "v_offsite", ""), "v_offsite");

  if (auto it = doc.find("anisotropy"); it != doc.end()) {
    if (!it->is_object()) rd.fail("anisotropy", "expected an object {x, y}");
    if (auto x = it->find("x"); x != it->end()) m.direction_scale[0] = rd.number(*x, "anisotropy.x");
    if (auto y = it->find("y"); y != it->end()) m.direction_scale[1] = rd.number(*y, "anisotropy.y");
  }

  m.validate();
  return m;
}

ExtendedHubbardModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file", 0, path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::string dump_model(const ExtendedHubbardModel& model) {
  json doc;
  if (!model.name.empty()) doc["name"] = model.name;
  doc["lattice"] = {{"nx", model.lattice.nx}, {"ny", model.lattice.ny}, {"boundary", "open"}};
  doc["bands"] = model.bands;
  doc["filling"] = model.filling;
  doc["t_intra"] = matrix_to_json(model.t_intra);
  doc["t_onsite"] = matrix_to_json(model.t_onsite);
  doc["u_onsite"] = matrix_to_json(model.u_onsite);
  doc["v_offsite"] = matrix_to_json(model.v_offsite);
  if (model.direction_scale != std::array<double, 2>{1.0, 1.0})
    doc["anisotropy"] = {{"x", model.direction_scale[0]}, {"y", model.direction_scale[1]}};
  return doc.dump(2);
}

}  // namespace dfvqe
