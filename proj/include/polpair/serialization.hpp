#pragma once

#include <json.hpp>
#include <string>

#include "polpair/polarization.hpp"

namespace polpair {

using json = nlohmann::ordered_json;

// Density matrix as {"basis": ["HH","VH","HV","VV"], "matrix": 4x4 of
// [re, im] pairs}.
json density_matrix_to_json(const TwoQubitDensityMatrix& rho);
TwoQubitDensityMatrix density_matrix_from_json(const json& j);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

// Fixed-format numeric printing used by every CSV and JSON writer, so that
// repeated runs with identical inputs produce byte-identical files.
std::string format_double(double value);

}  // namespace polpair
