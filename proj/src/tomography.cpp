#include "polpair/tomography.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "polpair/rng.hpp"
#include "polpair/serialization.hpp"

namespace polpair {

double ExperimentParams::signal_efficiency() const {
  return std::pow(10.0, signal_efficiency_db / 10.0);
}

double ExperimentParams::idler_efficiency() const {
  return std::pow(10.0, idler_efficiency_db / 10.0);
}

void ExperimentParams::validate() const {
  if (!(repetition_rate_hz > 0.0)) {
    throw std::invalid_argument("repetition rate must be positive");
  }
  if (pairs_per_pulse < 0.0) {
    throw std::invalid_argument("pair rate must be non-negative");
  }
  if (signal_efficiency_db > 0.0 || idler_efficiency_db > 0.0) {
    throw std::invalid_argument("efficiencies cannot exceed 0 dB");
  }
  if (integration_time_s < 0.0) {
    throw std::invalid_argument("integration time must be non-negative");
  }
  if (dark_count_rate_hz < 0.0) {
    throw std::invalid_argument("dark-count rate must be non-negative");
  }
}

const std::array<MeasurementSetting, 36>& tomography_settings() {
  static const std::array<MeasurementSetting, 36> settings = [] {
    std::array<MeasurementSetting, 36> list{};
    int k = 0;
    for (PolarizationLabel a : all_polarization_labels) {
      for (PolarizationLabel b : all_polarization_labels) {
        list[k++] = MeasurementSetting{a, b};
      }
    }
    return list;
  }();
  return settings;
}

namespace {

double joint_probability(const TwoQubitDensityMatrix& rho,
                         const MeasurementSetting& setting) {
  const Eigen::Matrix4cd op =
      two_qubit_operator(projector(setting.signal), projector(setting.idler));
  return std::max(0.0, (rho.matrix() * op).trace().real());
}

double marginal_probability(const TwoQubitDensityMatrix& rho,
                            PolarizationLabel label, bool idler_arm) {
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix4cd op = idler_arm
                                  ? two_qubit_operator(id, projector(label))
                                  : two_qubit_operator(projector(label), id);
  return std::max(0.0, (rho.matrix() * op).trace().real());
}

}  // namespace

double expected_coincidences(const TwoQubitDensityMatrix& rho,
                             const MeasurementSetting& setting,
                             const ExperimentParams& params) {
  return params.repetition_rate_hz * params.integration_time_s *
         params.pairs_per_pulse * params.signal_efficiency() *
         params.idler_efficiency() * joint_probability(rho, setting);
}

double expected_signal_singles_rate(const TwoQubitDensityMatrix& rho,
                                    PolarizationLabel label,
                                    const ExperimentParams& params) {
  return params.repetition_rate_hz * params.pairs_per_pulse *
             params.signal_efficiency() *
             marginal_probability(rho, label, false) +
         params.dark_count_rate_hz;
}

double expected_idler_singles_rate(const TwoQubitDensityMatrix& rho,
                                   PolarizationLabel label,
                                   const ExperimentParams& params) {
  return params.repetition_rate_hz * params.pairs_per_pulse *
             params.idler_efficiency() *
             marginal_probability(rho, label, true) +
         params.dark_count_rate_hz;
}

double accidental_expectation(const ExperimentParams& params,
                              double signal_rate_hz, double idler_rate_hz) {
  return signal_rate_hz * idler_rate_hz * params.integration_time_s /
         params.repetition_rate_hz;
}

TomographyDataset simulate_dataset(const TwoQubitDensityMatrix& rho,
                                   const ExperimentParams& params,
                                   std::uint64_t rng_seed) {
  params.validate();
  RandomStream stream(rng_seed);
  TomographyDataset dataset;
  dataset.params = params;

  const auto& settings = tomography_settings();
  for (std::size_t k = 0; k < settings.size(); ++k) {
    const MeasurementSetting& setting = settings[k];
    const double s_rate =
        expected_signal_singles_rate(rho, setting.signal, params);
    const double i_rate =
        expected_idler_singles_rate(rho, setting.idler, params);
    const double acc = params.model_accidentals
                           ? accidental_expectation(params, s_rate, i_rate)
                           : 0.0;
    const double truth = expected_coincidences(rho, setting, params);

    CountRecord& rec = dataset.records[k];
    rec.setting = setting;
    rec.coincidences = stream.poisson(truth + acc);
    rec.accidentals = stream.poisson(acc);
    rec.singles_signal =
        stream.poisson(s_rate * params.integration_time_s);
    rec.singles_idler =
        stream.poisson(i_rate * params.integration_time_s);
  }
  return dataset;
}

std::string dataset_to_csv(const TomographyDataset& dataset) {
  std::string csv =
      "signal_label,idler_label,coincidences,accidentals,"
      "singles_signal,singles_idler\n";
  for (const CountRecord& rec : dataset.records) {
    csv += to_string(rec.setting.signal);
    csv += ',';
    csv += to_string(rec.setting.idler);
    csv += ',';
    csv += std::to_string(rec.coincidences);
    csv += ',';
    csv += std::to_string(rec.accidentals);
    csv += ',';
    csv += std::to_string(rec.singles_signal);
    csv += ',';
    csv += std::to_string(rec.singles_idler);
    csv += '\n';
  }
  return csv;
}

TomographyDataset dataset_from_csv(const std::string& csv_text,
                                   const ExperimentParams& params) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("dataset CSV is empty");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::string header =
      "signal_label,idler_label,coincidences,accidentals,"
      "singles_signal,singles_idler";
  if (line != header) {
    throw std::runtime_error("dataset CSV row 1: expected header '" + header +
                             "', got '" + line + "'");
  }

  TomographyDataset dataset;
  dataset.params = params;
  std::array<bool, 36> seen{};
  int row = 1;
  int filled = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::istringstream fields(line);
    std::array<std::string, 6> cell;
    for (int c = 0; c < 6; ++c) {
      if (!std::getline(fields, cell[c], ',')) {
        throw std::runtime_error("dataset CSV row " + std::to_string(row) +
                                 ": expected 6 columns");
      }
    }

    CountRecord rec;
    try {
      rec.setting.signal = polarization_label_from_string(cell[0]);
      rec.setting.idler = polarization_label_from_string(cell[1]);
    } catch (const std::exception&) {
      throw std::runtime_error("dataset CSV row " + std::to_string(row) +
                               ": unknown polarization label");
    }
    long long* const counts[4] = {&rec.coincidences, &rec.accidentals,
                                  &rec.singles_signal, &rec.singles_idler};
    for (int c = 0; c < 4; ++c) {
      try {
        std::size_t used = 0;
        *counts[c] = std::stoll(cell[c + 2], &used);
        if (used != cell[c + 2].size()) throw std::invalid_argument(cell[c + 2]);
      } catch (const std::exception&) {
        throw std::runtime_error("dataset CSV row " + std::to_string(row) +
                                 ": cannot parse count '" + cell[c + 2] + "'");
      }
      if (*counts[c] < 0) {
        throw std::runtime_error("dataset CSV row " + std::to_string(row) +
                                 ": counts must be non-negative");
      }
    }

    const auto& settings = tomography_settings();
    int index = -1;
    for (std::size_t k = 0; k < settings.size(); ++k) {
      if (settings[k].signal == rec.setting.signal &&
          settings[k].idler == rec.setting.idler) {
        index = static_cast<int>(k);
        break;
      }
    }
    if (seen[index]) {
      throw std::runtime_error("dataset CSV row " + std::to_string(row) +
                               ": duplicate setting " +
                               to_string(rec.setting.signal) + "," +
                               to_string(rec.setting.idler));
    }
    seen[index] = true;
    dataset.records[index] = rec;
    ++filled;
  }
  if (filled != 36) {
    throw std::runtime_error("dataset CSV: expected 36 settings, found " +
                             std::to_string(filled));
  }
  return dataset;
}

TomographyDataset load_dataset_csv(const std::string& path,
                                   const ExperimentParams& params) {
  return dataset_from_csv(read_text_file(path), params);
}

}  // namespace polpair
