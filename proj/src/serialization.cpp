#include "polpair/serialization.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace polpair {

json density_matrix_to_json(const TwoQubitDensityMatrix& rho) {
  json j;
  j["basis"] = {"HH", "VH", "HV", "VV"};
  json rows = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int k = 0; k < 4; ++k) {
      row.push_back({rho.matrix()(i, k).real(), rho.matrix()(i, k).imag()});
    }
    rows.push_back(row);
  }
  j["matrix"] = rows;
  return j;
}

TwoQubitDensityMatrix density_matrix_from_json(const json& j) {
  const auto& basis = j.at("basis");
  const std::array<const char*, 4> expected = {"HH", "VH", "HV", "VV"};
  for (int i = 0; i < 4; ++i) {
    if (basis.at(i).get<std::string>() != expected[i]) {
      throw std::invalid_argument("unexpected basis order in density matrix");
    }
  }
  Eigen::Matrix4cd m;
  const auto& rows = j.at("matrix");
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      const auto& cell = rows.at(i).at(k);
      m(i, k) = complexd(cell.at(0).get<double>(), cell.at(1).get<double>());
    }
  return TwoQubitDensityMatrix(m);
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

}  // namespace polpair
