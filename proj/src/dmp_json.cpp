#include "lfd/dmp_json.hpp"

#include <fstream>

namespace lfd::dmp {

using json_io::Json;
using json_io::Where;

namespace {

Json matrix_rows(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(m(r, c));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd read_weights(const Json& j, std::size_t n, const Where& at) {
  if (!j.is_array() || j.size() != 3) {
    at.fail("expected 3 rows");
  }
  Eigen::MatrixXd m(3, static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < 3; ++r) {
    const std::vector<double> row = json_io::to_double_array(j[r], at / std::to_string(r));
    if (row.size() != n) {
      (at / std::to_string(r)).fail("expected N = " + std::to_string(n) + " weights");
    }
    for (std::size_t c = 0; c < n; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
    }
  }
  return m;
}

}  // namespace

Json to_json(const PoseDmp& dmp) {
  return {{"alpha_s", dmp.canonical.alpha_s},
          {"alpha_z", dmp.transform.alpha_z},
          {"beta_z", dmp.transform.beta_z},
          {"tau", dmp.canonical.tau},
          {"N", dmp.basis.size()},
          {"gate_mode", to_string(dmp.gate)},
          {"centers", dmp.basis.centers},
          {"widths", dmp.basis.widths},
          {"weights_pos", matrix_rows(dmp.weights_position)},
          {"weights_rot", matrix_rows(dmp.weights_rotation)},
          {"demo_start", json_io::from_pose(dmp.demo_start)},
          {"demo_goal", json_io::from_pose(dmp.demo_goal)}};
}

PoseDmp from_json(const Json& j, const std::string& source) {
  const Where at{source, ""};
  json_io::reject_unknown_keys(j,
                               {"alpha_s", "alpha_z", "beta_z", "tau", "N", "gate_mode", "centers",
                                "widths", "weights_pos", "weights_rot", "demo_start", "demo_goal"},
                               at);
  auto num = [&](const char* key) {
    return json_io::to_double(json_io::require(j, key, at), at / key);
  };
  PoseDmp dmp;
  dmp.canonical.alpha_s = num("alpha_s");
  dmp.canonical.tau = num("tau");
  dmp.transform.alpha_z = num("alpha_z");
  dmp.transform.beta_z = num("beta_z");
  if (!(dmp.canonical.alpha_s > 0.0)) (at / "alpha_s").fail("must be positive");
  if (!(dmp.canonical.tau > 0.0)) (at / "tau").fail("must be positive");
  if (!(dmp.transform.alpha_z > 0.0)) (at / "alpha_z").fail("must be positive");
  if (!(dmp.transform.beta_z > 0.0)) (at / "beta_z").fail("must be positive");

  const int n = json_io::to_int(json_io::require(j, "N", at), at / "N");
  if (n < 2) {
    (at / "N").fail("must be at least 2");
  }
  const std::string gate = json_io::to_string(json_io::require(j, "gate_mode", at), at / "gate_mode");
  try {
    dmp.gate = gate_mode_from_string(gate);
  } catch (const std::invalid_argument& e) {
    (at / "gate_mode").fail(e.what());
  }
  dmp.basis.centers = json_io::to_double_array(json_io::require(j, "centers", at), at / "centers");
  dmp.basis.widths = json_io::to_double_array(json_io::require(j, "widths", at), at / "widths");
  const auto un = static_cast<std::size_t>(n);
  if (dmp.basis.centers.size() != un) (at / "centers").fail("expected N entries");
  if (dmp.basis.widths.size() != un) (at / "widths").fail("expected N entries");
  try {
    dmp.basis.validate();
  } catch (const std::invalid_argument& e) {
    (at / "centers").fail(e.what());
  }
  dmp.weights_position = read_weights(json_io::require(j, "weights_pos", at), un, at / "weights_pos");
  dmp.weights_rotation = read_weights(json_io::require(j, "weights_rot", at), un, at / "weights_rot");
  dmp.demo_start = json_io::to_pose(json_io::require(j, "demo_start", at), at / "demo_start");
  dmp.demo_goal = json_io::to_pose(json_io::require(j, "demo_goal", at), at / "demo_goal");
  return dmp;
}

void save_dmp(const std::string& path, const PoseDmp& dmp) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  out << to_json(dmp).dump(2) << '\n';
}

PoseDmp load_dmp(const std::string& path) { return from_json(json_io::read_file(path), path); }

}  // namespace lfd::dmp
