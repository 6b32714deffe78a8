#include "polpair/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "polpair/fixtures.hpp"

namespace polpair {

namespace {

void check_keys(const json& obj, const std::string& section,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) {
    throw ConfigError("config: '" + section + "' must be an object");
  }
  const std::set<std::string> known(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (known.find(item.key()) == known.end()) {
      throw ConfigError("config: unknown key '" + item.key() + "' in '" +
                        section + "'");
    }
  }
}

double read_number(const json& obj, const std::string& section,
                   const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& value = obj.at(key);
  if (!value.is_number()) {
    throw ConfigError("config: '" + section + "." + key +
                      "' must be a number");
  }
  return value.get<double>();
}

int read_int(const json& obj, const std::string& section, const char* key,
             int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& value = obj.at(key);
  if (!value.is_number_integer()) {
    throw ConfigError("config: '" + section + "." + key +
                      "' must be an integer");
  }
  return value.get<int>();
}

bool read_bool(const json& obj, const std::string& section, const char* key,
               bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& value = obj.at(key);
  if (!value.is_boolean()) {
    throw ConfigError("config: '" + section + "." + key +
                      "' must be a boolean");
  }
  return value.get<bool>();
}

std::string read_string(const json& obj, const std::string& section,
                        const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& value = obj.at(key);
  if (!value.is_string()) {
    throw ConfigError("config: '" + section + "." + key +
                      "' must be a string");
  }
  return value.get<std::string>();
}

ModeDispersion::TaylorCoefficients read_taylor_mode(const json& obj,
                                                    const std::string& section,
                                                    double omega0) {
  check_keys(obj, section, {"k0_rad_m", "k1_s_m", "k2_s2_m", "k3_s3_m"});
  ModeDispersion::TaylorCoefficients coeffs;
  coeffs.omega0 = omega0;
  coeffs.k0 = read_number(obj, section, "k0_rad_m", 0.0);
  coeffs.k1 = read_number(obj, section, "k1_s_m", 0.0);
  coeffs.k2 = read_number(obj, section, "k2_s2_m", 0.0);
  coeffs.k3 = read_number(obj, section, "k3_s3_m", 0.0);
  return coeffs;
}

void parse_dispersion_section(const json& obj, RunConfig& config) {
  check_keys(obj, "dispersion",
             {"source", "dgi_scale", "length_m", "csv_paths",
              "taylor_models"});

  const std::string source = read_string(obj, "dispersion", "source",
                                         "fixture");
  if (source == "fixture") {
    config.dispersion_source = DispersionSource::Fixture;
  } else if (source == "symmetric") {
    config.dispersion_source = DispersionSource::Symmetric;
  } else if (source == "csv") {
    config.dispersion_source = DispersionSource::Csv;
  } else if (source == "taylor") {
    config.dispersion_source = DispersionSource::Taylor;
  } else {
    throw ConfigError(
        "config: 'dispersion.source' must be one of fixture, symmetric, "
        "csv, taylor; got '" +
        source + "'");
  }

  config.fixture_dgi_scale =
      read_number(obj, "dispersion", "dgi_scale", config.fixture_dgi_scale);
  config.waveguide_length_m =
      read_number(obj, "dispersion", "length_m", config.waveguide_length_m);
  if (!(config.waveguide_length_m > 0.0)) {
    throw ConfigError("config: 'dispersion.length_m' must be positive");
  }

  if (obj.contains("csv_paths")) {
    const json& paths = obj.at("csv_paths");
    if (!paths.is_object()) {
      throw ConfigError("config: 'dispersion.csv_paths' must map width "
                        "labels to file paths");
    }
    for (const auto& item : paths.items()) {
      if (!item.value().is_string()) {
        throw ConfigError("config: 'dispersion.csv_paths." + item.key() +
                          "' must be a string path");
      }
      config.dispersion_csv_paths[item.key()] =
          item.value().get<std::string>();
    }
  }

  if (obj.contains("taylor_models")) {
    const json& models = obj.at("taylor_models");
    if (!models.is_object()) {
      throw ConfigError("config: 'dispersion.taylor_models' must map width "
                        "labels to mode models");
    }
    for (const auto& item : models.items()) {
      const std::string section = "dispersion.taylor_models." + item.key();
      check_keys(item.value(), section,
                 {"omega0_rad_s", "omega_min_rad_s", "omega_max_rad_s", "te",
                  "tm"});
      TaylorModelConfig model;
      const double omega0 =
          read_number(item.value(), section, "omega0_rad_s", 0.0);
      model.omega_min_rad_s =
          read_number(item.value(), section, "omega_min_rad_s", 0.0);
      model.omega_max_rad_s =
          read_number(item.value(), section, "omega_max_rad_s", 0.0);
      if (!(omega0 > 0.0) || !(model.omega_min_rad_s > 0.0) ||
          !(model.omega_max_rad_s > model.omega_min_rad_s)) {
        throw ConfigError("config: '" + section +
                          "' needs positive omega0_rad_s and an increasing "
                          "[omega_min_rad_s, omega_max_rad_s] window");
      }
      if (!item.value().contains("te") || !item.value().contains("tm")) {
        throw ConfigError("config: '" + section +
                          "' needs both 'te' and 'tm' models");
      }
      model.te = read_taylor_mode(item.value().at("te"), section + ".te",
                                  omega0);
      model.tm = read_taylor_mode(item.value().at("tm"), section + ".tm",
                                  omega0);
      config.taylor_models[item.key()] = model;
    }
  }
}

}  // namespace

WaveguideSpec RunConfig::waveguide_for(double width_nm) const {
  WaveguideSpec spec;
  switch (dispersion_source) {
    case DispersionSource::Fixture: {
      FixtureOptions options;
      options.dgi_scale = fixture_dgi_scale;
      try {
        spec = reference_waveguide(width_nm, options);
      } catch (const std::exception& error) {
        throw ConfigError(std::string("config: ") + error.what());
      }
      break;
    }
    case DispersionSource::Symmetric:
      spec = symmetric_waveguide();
      break;
    case DispersionSource::Csv: {
      const std::string label = format_double(width_nm);
      const auto found = dispersion_csv_paths.find(label);
      if (found == dispersion_csv_paths.end()) {
        throw ConfigError("config: no entry in 'dispersion.csv_paths' for "
                          "width " +
                          label);
      }
      try {
        auto modes = load_dispersion_csv(found->second);
        spec.te = std::move(modes.first);
        spec.tm = std::move(modes.second);
      } catch (const std::exception& error) {
        throw ConfigError("config: cannot load dispersion CSV '" +
                          found->second + "': " + error.what());
      }
      spec.width_label = label + "nm";
      break;
    }
    case DispersionSource::Taylor: {
      const std::string label = format_double(width_nm);
      const auto found = taylor_models.find(label);
      if (found == taylor_models.end()) {
        throw ConfigError("config: no entry in 'dispersion.taylor_models' "
                          "for width " +
                          label);
      }
      const TaylorModelConfig& model = found->second;
      spec.te = ModeDispersion::taylor(ModePolarization::TE, model.te,
                                       model.omega_min_rad_s,
                                       model.omega_max_rad_s);
      spec.tm = ModeDispersion::taylor(ModePolarization::TM, model.tm,
                                       model.omega_min_rad_s,
                                       model.omega_max_rad_s);
      spec.width_label = label + "nm";
      break;
    }
  }
  spec.length = waveguide_length_m;
  return spec;
}

WaveguideFamily RunConfig::waveguide_family() const {
  return [config = *this](double width_nm) {
    return config.waveguide_for(width_nm);
  };
}

RunConfig parse_run_config(const json& config) {
  check_keys(config, "top level",
             {"dispersion", "pump", "filter", "grid", "experiment",
              "reconstruction", "sweep", "seed", "output_dir"});

  RunConfig result;

  if (config.contains("dispersion")) {
    parse_dispersion_section(config.at("dispersion"), result);
  }

  if (config.contains("pump")) {
    const json& pump = config.at("pump");
    check_keys(pump, "pump", {"center_nm", "bandwidth_hz"});
    result.pump.center_nm =
        read_number(pump, "pump", "center_nm", result.pump.center_nm);
    result.pump.bandwidth_hz =
        read_number(pump, "pump", "bandwidth_hz", result.pump.bandwidth_hz);
    if (!(result.pump.center_nm > 0.0) || !(result.pump.bandwidth_hz > 0.0)) {
      throw ConfigError("config: pump center and bandwidth must be positive");
    }
  }

  if (config.contains("filter")) {
    const json& filter = config.at("filter");
    check_keys(filter, "filter",
               {"signal_center_nm", "idler_center_nm", "bandwidth_hz"});
    result.filter.signal_center_nm = read_number(
        filter, "filter", "signal_center_nm", result.filter.signal_center_nm);
    result.filter.idler_center_nm = read_number(
        filter, "filter", "idler_center_nm", result.filter.idler_center_nm);
    result.filter.bandwidth_hz = read_number(filter, "filter", "bandwidth_hz",
                                             result.filter.bandwidth_hz);
    if (!(result.filter.signal_center_nm > 0.0) ||
        !(result.filter.idler_center_nm > 0.0) ||
        !(result.filter.bandwidth_hz > 0.0)) {
      throw ConfigError("config: filter centers and bandwidth must be "
                        "positive");
    }
  }

  if (config.contains("grid")) {
    const json& grid = config.at("grid");
    check_keys(grid, "grid",
               {"points_per_passband", "pump_quadrature_points", "span"});
    result.grid.points_per_passband =
        read_int(grid, "grid", "points_per_passband",
                 result.grid.points_per_passband);
    result.grid.pump_quadrature_points =
        read_int(grid, "grid", "pump_quadrature_points",
                 result.grid.pump_quadrature_points);
    result.grid.span = read_number(grid, "grid", "span", result.grid.span);
    if (result.grid.points_per_passband < 2 ||
        result.grid.pump_quadrature_points < 8 ||
        !(result.grid.span > 0.0)) {
      throw ConfigError(
          "config: grid needs points_per_passband >= 2, "
          "pump_quadrature_points >= 8 and a positive span");
    }
  }

  if (config.contains("experiment")) {
    const json& experiment = config.at("experiment");
    check_keys(experiment, "experiment",
               {"repetition_rate_hz", "pairs_per_pulse",
                "signal_efficiency_db", "idler_efficiency_db",
                "integration_time_s", "dark_count_rate_hz",
                "model_accidentals"});
    ExperimentParams& p = result.experiment;
    p.repetition_rate_hz = read_number(experiment, "experiment",
                                       "repetition_rate_hz",
                                       p.repetition_rate_hz);
    p.pairs_per_pulse = read_number(experiment, "experiment",
                                    "pairs_per_pulse", p.pairs_per_pulse);
    p.signal_efficiency_db =
        read_number(experiment, "experiment", "signal_efficiency_db",
                    p.signal_efficiency_db);
    p.idler_efficiency_db =
        read_number(experiment, "experiment", "idler_efficiency_db",
                    p.idler_efficiency_db);
    p.integration_time_s = read_number(
        experiment, "experiment", "integration_time_s", p.integration_time_s);
    p.dark_count_rate_hz = read_number(
        experiment, "experiment", "dark_count_rate_hz", p.dark_count_rate_hz);
    p.model_accidentals = read_bool(experiment, "experiment",
                                    "model_accidentals", p.model_accidentals);
    try {
      p.validate();
    } catch (const std::exception& error) {
      throw ConfigError(std::string("config: experiment: ") + error.what());
    }
  }

  if (config.contains("reconstruction")) {
    const json& rec = config.at("reconstruction");
    check_keys(rec, "reconstruction",
               {"monte_carlo_instances", "max_iterations", "tolerance"});
    result.monte_carlo_instances =
        read_int(rec, "reconstruction", "monte_carlo_instances",
                 result.monte_carlo_instances);
    result.mle.max_iterations = read_int(rec, "reconstruction",
                                         "max_iterations",
                                         result.mle.max_iterations);
    result.mle.tolerance =
        read_number(rec, "reconstruction", "tolerance", result.mle.tolerance);
    if (result.monte_carlo_instances < 1 || result.mle.max_iterations < 1 ||
        !(result.mle.tolerance > 0.0)) {
      throw ConfigError(
          "config: reconstruction needs positive monte_carlo_instances, "
          "max_iterations and tolerance");
    }
  }

  if (config.contains("sweep")) {
    const json& sweep = config.at("sweep");
    check_keys(sweep, "sweep", {"widths_nm", "replicas"});
    if (sweep.contains("widths_nm")) {
      const json& widths = sweep.at("widths_nm");
      if (!widths.is_array()) {
        throw ConfigError("config: 'sweep.widths_nm' must be an array");
      }
      result.sweep_widths_nm.clear();
      for (const json& value : widths) {
        if (!value.is_number()) {
          throw ConfigError(
              "config: 'sweep.widths_nm' entries must be numbers");
        }
        result.sweep_widths_nm.push_back(value.get<double>());
      }
    }
    result.sweep_replicas =
        read_int(sweep, "sweep", "replicas", result.sweep_replicas);
    if (result.sweep_replicas < 1) {
      throw ConfigError("config: 'sweep.replicas' must be at least 1");
    }
  }
  if (result.sweep_widths_nm.empty()) {
    throw ConfigError("config: 'sweep.widths_nm' must not be empty");
  }
  for (std::size_t i = 1; i < result.sweep_widths_nm.size(); ++i) {
    if (!(result.sweep_widths_nm[i] > result.sweep_widths_nm[i - 1])) {
      throw ConfigError(
          "config: 'sweep.widths_nm' must be strictly increasing");
    }
  }

  if (config.contains("seed")) {
    const json& seed = config.at("seed");
    if (!seed.is_number_unsigned()) {
      throw ConfigError("config: 'seed' must be a non-negative integer");
    }
    result.seed = seed.get<std::uint64_t>();
  }

  result.output_dir =
      read_string(config, "top level", "output_dir", result.output_dir);
  if (result.output_dir.empty()) {
    throw ConfigError("config: 'output_dir' must not be empty");
  }

  return result;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  json parsed;
  try {
    parsed = json::parse(buffer.str());
  } catch (const json::parse_error& error) {
    throw ConfigError("config: '" + path + "' is not valid JSON: " +
                      error.what());
  }
  return parse_run_config(parsed);
}

}  // namespace polpair
