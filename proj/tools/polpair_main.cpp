#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "polpair/analysis.hpp"
#include "polpair/bpw.hpp"
#include "polpair/chsh.hpp"
#include "polpair/config.hpp"
#include "polpair/constants.hpp"
#include "polpair/dispersion.hpp"
#include "polpair/entanglement.hpp"
#include "polpair/mle.hpp"
#include "polpair/rng.hpp"
#include "polpair/serialization.hpp"
#include "polpair/tomography.hpp"

namespace fs = std::filesystem;
using namespace polpair;

namespace {

json metrics_json(const TwoQubitDensityMatrix& rho) {
  json metrics;
  metrics["concurrence"] = concurrence(rho);
  metrics["chsh"] = chsh_horodecki_bound(rho);
  metrics["purity"] = purity(rho);
  try {
    metrics["relative_phase_rad"] = relative_phase(rho);
  } catch (const std::domain_error&) {
    metrics["relative_phase_rad"] = nullptr;
  }
  const BellFidelities bf = bell_fidelities(rho);
  metrics["f_phi_plus"] = bf.f_plus;
  metrics["f_phi_minus"] = bf.f_minus;
  return metrics;
}

fs::path prepare_output_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw ConfigError("cannot create output directory '" + dir +
                      "': " + ec.message());
  }
  return fs::path(dir);
}

// Output problems are user-environment problems, not numerics.
void save(const fs::path& path, const std::string& text) {
  try {
    write_text_file(path.string(), text);
  } catch (const std::exception& error) {
    throw ConfigError(error.what());
  }
}

std::string seed_tag(std::uint64_t seed) { return std::to_string(seed); }

int cmd_dispersion(const RunConfig& cfg, double width, const fs::path& out) {
  const WaveguideSpec spec = cfg.waveguide_for(width);

  const double omega_lo =
      std::max(spec.te.omega_min(), spec.tm.omega_min());
  const double omega_hi =
      std::min(spec.te.omega_max(), spec.tm.omega_max());
  // A hair inside the validity window so wavelength round trips cannot
  // step outside it.
  const double lambda_lo = wavelength_nm_from_omega(omega_hi) + 1e-6;
  const double lambda_hi = wavelength_nm_from_omega(omega_lo) - 1e-6;

  const int points = 201;
  std::string csv = "wavelength_nm,k2_te_s2_m,k2_tm_s2_m,ng_te,ng_tm\n";
  for (int i = 0; i < points; ++i) {
    const double lambda =
        lambda_lo + (lambda_hi - lambda_lo) * i / (points - 1);
    const double omega = omega_from_wavelength_nm(lambda);
    csv += format_double(lambda);
    csv += ',';
    csv += format_double(spec.te.gvd(omega));
    csv += ',';
    csv += format_double(spec.tm.gvd(omega));
    csv += ',';
    csv += format_double(spec.te.group_index(omega));
    csv += ',';
    csv += format_double(spec.tm.group_index(omega));
    csv += '\n';
  }

  json report;
  report["width_nm"] = width;
  report["width_label"] = spec.width_label;
  report["length_m"] = spec.length;
  report["pump_center_nm"] = cfg.pump.center_nm;
  report["dgi_at_pump"] =
      group_index_difference(spec, cfg.pump.center_omega());
  const std::pair<const char*, const ModeDispersion*> zdw_targets[] = {
      {"zdw_te_nm", &spec.te}, {"zdw_tm_nm", &spec.tm}};
  for (const auto& [key, mode] : zdw_targets) {
    try {
      report[key] = zero_dispersion_wavelength(*mode, lambda_lo, lambda_hi);
    } catch (const std::domain_error&) {
      report[key] = nullptr;
    }
  }
  json scan;
  scan["lambda_min_nm"] = lambda_lo;
  scan["lambda_max_nm"] = lambda_hi;
  scan["points"] = points;
  report["scan"] = scan;

  const std::string stem = "dispersion_w" + format_double(width);
  report["csv"] = stem + ".csv";
  save(out / (stem + ".csv"), csv);
  save(out / (stem + ".json"), report.dump(2) + "\n");

  const auto zdw_text = [&](const char* key) {
    return report[key].is_null()
               ? std::string("none")
               : format_double(report[key].get<double>()) + " nm";
  };
  std::cout << "width " << format_double(width) << " nm: DGI at pump "
            << format_double(report["dgi_at_pump"].get<double>())
            << ", ZDW TE " << zdw_text("zdw_te_nm") << ", ZDW TM "
            << zdw_text("zdw_tm_nm") << "\n";
  std::cout << "wrote " << (out / (stem + ".csv")).string() << "\n";
  std::cout << "wrote " << (out / (stem + ".json")).string() << "\n";
  return 0;
}

int cmd_predict(const RunConfig& cfg, double width, const fs::path& out) {
  const WaveguideSpec spec = cfg.waveguide_for(width);
  const Prediction prediction =
      predict_polarization_state(spec, cfg.pump, cfg.filter, cfg.grid);

  json report;
  report["width_nm"] = width;
  report["width_label"] = spec.width_label;
  report["r"] = prediction.ratio;
  report["dgi_at_pump"] =
      group_index_difference(spec, cfg.pump.center_omega());
  const std::pair<const char*, const char*> sector_names[] = {
      {"hh", "HH"}, {"vh", "VH"}, {"hv", "HV"}, {"vv", "VV"}};
  json norms;
  for (const auto& [key, sector] : sector_names) {
    norms[key] = prediction.sectors.sector(sector).squared_norm();
  }
  report["sector_norms"] = norms;
  report["density_matrix"] = density_matrix_to_json(prediction.rho);
  report["metrics"] = metrics_json(prediction.rho);

  const std::string stem = "bpw_w" + format_double(width);
  json artifacts = json::array();
  for (const auto& [key, sector] : sector_names) {
    const std::string name = stem + "_" + std::string(key) + ".csv";
    save(out / name, amplitude_grid_csv(prediction.sectors.sector(sector)));
    artifacts.push_back(name);
  }
  save(out / (stem + "_grid.json"),
       amplitude_grid_metadata(prediction.sectors, cfg.pump, cfg.filter)
               .dump(2) +
           "\n");
  artifacts.push_back(stem + "_grid.json");
  report["artifacts"] = artifacts;

  const std::string report_name = "predict_w" + format_double(width) +
                                  ".json";
  save(out / report_name, report.dump(2) + "\n");

  const json& metrics = report["metrics"];
  std::cout << "width " << format_double(width) << " nm: r "
            << format_double(prediction.ratio) << ", C "
            << format_double(metrics["concurrence"].get<double>()) << ", S "
            << format_double(metrics["chsh"].get<double>()) << ", purity "
            << format_double(metrics["purity"].get<double>()) << "\n";
  std::cout << "wrote " << (out / report_name).string() << "\n";
  return 0;
}

int cmd_experiment(const RunConfig& cfg, double width, std::uint64_t seed,
                   bool no_subtraction, const fs::path& out) {
  const WaveguideSpec spec = cfg.waveguide_for(width);
  const std::string stem =
      "experiment_w" + format_double(width) + "_s" + seed_tag(seed);

  try {
    const Prediction prediction =
        predict_polarization_state(spec, cfg.pump, cfg.filter, cfg.grid);
    const TomographyDataset dataset = simulate_dataset(
        prediction.rho, cfg.experiment,
        derive_seed(seed, "experiment", stream_key(width), 0));
    save(out / (stem + "_dataset.csv"), dataset_to_csv(dataset));

    json report;
    report["width_nm"] = width;
    report["seed"] = seed;
    report["dataset_csv"] = stem + "_dataset.csv";
    json predicted;
    predicted["r"] = prediction.ratio;
    predicted["density_matrix"] = density_matrix_to_json(prediction.rho);
    predicted["metrics"] = metrics_json(prediction.rho);
    report["predicted"] = predicted;

    MonteCarloOptions mc_options;
    mc_options.n_instances = cfg.monte_carlo_instances;
    mc_options.mle = cfg.mle;

    const MleResult raw = mle_reconstruct(dataset, false, cfg.mle);
    mc_options.subtract_accidentals = false;
    const MonteCarloSummary raw_mc = monte_carlo_errors(
        dataset, derive_seed(seed, "experiment-mc-raw", stream_key(width), 0),
        mc_options);
    report["raw"] = reconstruction_report(raw, raw_mc, seed, false);
    std::cout << "width " << format_double(width) << " nm, seed "
              << seed_tag(seed) << ": raw C "
              << format_double(concurrence(raw.rho)) << " +- "
              << format_double(raw_mc.concurrence.std) << "\n";

    if (no_subtraction) {
      report["subtracted"] = nullptr;
    } else {
      const MleResult acs = mle_reconstruct(dataset, true, cfg.mle);
      mc_options.subtract_accidentals = true;
      const MonteCarloSummary acs_mc = monte_carlo_errors(
          dataset,
          derive_seed(seed, "experiment-mc-acs", stream_key(width), 0),
          mc_options);
      report["subtracted"] = reconstruction_report(acs, acs_mc, seed, true);
      std::cout << "width " << format_double(width) << " nm, seed "
                << seed_tag(seed) << ": subtracted C "
                << format_double(concurrence(acs.rho)) << " +- "
                << format_double(acs_mc.concurrence.std) << "\n";
    }

    save(out / (stem + "_report.json"), report.dump(2) + "\n");
    std::cout << "wrote " << (out / (stem + "_dataset.csv")).string() << "\n";
    std::cout << "wrote " << (out / (stem + "_report.json")).string() << "\n";
    return 0;
  } catch (const std::exception& error) {
    // Leave whatever was already written, plus a marker naming the failure.
    std::ofstream marker(out / (stem + "_FAILED.txt"));
    marker << error.what() << "\n";
    throw;
  }
}

int cmd_reconstruct(const RunConfig& cfg, const std::string& dataset_path,
                    std::uint64_t seed, bool no_subtraction,
                    const fs::path& out) {
  TomographyDataset dataset;
  try {
    dataset = load_dataset_csv(dataset_path, cfg.experiment);
  } catch (const std::exception& error) {
    throw ConfigError("dataset '" + dataset_path + "': " + error.what());
  }

  const bool subtract = !no_subtraction;
  const MleResult fit = mle_reconstruct(dataset, subtract, cfg.mle);
  MonteCarloOptions mc_options;
  mc_options.n_instances = cfg.monte_carlo_instances;
  mc_options.subtract_accidentals = subtract;
  mc_options.mle = cfg.mle;
  const MonteCarloSummary mc = monte_carlo_errors(
      dataset, derive_seed(seed, "reconstruct-mc", 0, 0), mc_options);

  json report = reconstruction_report(fit, mc, seed, subtract);
  report["dataset_csv"] = dataset_path;

  const std::string name = "reconstruct_s" + seed_tag(seed) + "_report.json";
  save(out / name, report.dump(2) + "\n");

  std::cout << "seed " << seed_tag(seed) << ": C "
            << format_double(concurrence(fit.rho)) << " +- "
            << format_double(mc.concurrence.std) << ", S "
            << format_double(chsh_horodecki_bound(fit.rho)) << ", purity "
            << format_double(purity(fit.rho))
            << (subtract ? " (accidentals subtracted)" : " (raw)") << "\n";
  std::cout << "wrote " << (out / name).string() << "\n";
  return 0;
}

int cmd_sweep(const RunConfig& cfg, std::uint64_t seed, const fs::path& out) {
  // Surface missing width entries or unreadable files as configuration
  // errors before any heavy work starts.
  for (double width : cfg.sweep_widths_nm) cfg.waveguide_for(width);

  SweepOptions options;
  options.pump = cfg.pump;
  options.filter = cfg.filter;
  options.grid = cfg.grid;
  options.experiment = cfg.experiment;
  options.mle = cfg.mle;
  options.replicas = cfg.sweep_replicas;

  const SweepResult sweep =
      width_sweep(cfg.waveguide_family(), cfg.sweep_widths_nm, options, seed);

  const std::string name = "sweep_s" + seed_tag(seed) + ".csv";
  save(out / name, sweep_to_csv(sweep));

  for (const SweepRecord& rec : sweep.records) {
    std::cout << "width " << format_double(rec.width_nm) << " nm: C_pure "
              << format_double(rec.c_pure) << ", C_acs "
              << format_double(rec.c_acs_mean) << " +- "
              << format_double(rec.c_acs_std) << ", S "
              << format_double(rec.s_mean) << "\n";
  }
  std::cout << "wrote " << (out / name).string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polarization-entangled photon-pair simulation and analysis"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::string dataset_path;
  double width = 0.0;
  std::uint64_t seed = 0;
  bool no_subtraction = false;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path,
                    "JSON run configuration (defaults used when omitted)");
    cmd->add_option("--out", out_override, "output directory");
    cmd->add_option("--seed", seed, "top-level random seed");
  };

  CLI::App* dispersion =
      app.add_subcommand("dispersion", "Mode dispersion report for one width");
  add_common(dispersion);
  dispersion->add_option("--width", width, "waveguide width in nm")
      ->required();

  CLI::App* predict = app.add_subcommand(
      "predict", "Predicted biphoton state and entanglement metrics");
  add_common(predict);
  predict->add_option("--width", width, "waveguide width in nm")->required();

  CLI::App* experiment = app.add_subcommand(
      "experiment", "Simulate a tomography run and reconstruct the state");
  add_common(experiment);
  experiment->add_option("--width", width, "waveguide width in nm")
      ->required();
  experiment->add_flag("--no-accidental-subtraction", no_subtraction,
                       "fit raw coincidences only");

  CLI::App* reconstruct = app.add_subcommand(
      "reconstruct", "Reconstruct a state from an existing dataset CSV");
  add_common(reconstruct);
  reconstruct->add_option("dataset", dataset_path, "36-setting dataset CSV")
      ->required();
  reconstruct->add_flag("--no-accidental-subtraction", no_subtraction,
                        "fit raw coincidences only");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Concurrence and metrics across the configured width range");
  add_common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    RunConfig cfg =
        config_path.empty() ? RunConfig{} : load_run_config(config_path);
    if (!out_override.empty()) cfg.output_dir = out_override;

    CLI::App* active = app.get_subcommands().front();
    if (active->count("--seed") > 0) cfg.seed = seed;

    if ((active == dispersion || active == predict || active == experiment) &&
        !(width > 0.0)) {
      throw ConfigError("--width must be positive");
    }

    const fs::path out = prepare_output_dir(cfg.output_dir);
    if (active == dispersion) return cmd_dispersion(cfg, width, out);
    if (active == predict) return cmd_predict(cfg, width, out);
    if (active == experiment) {
      return cmd_experiment(cfg, width, cfg.seed, no_subtraction, out);
    }
    if (active == reconstruct) {
      return cmd_reconstruct(cfg, dataset_path, cfg.seed, no_subtraction,
                             out);
    }
    return cmd_sweep(cfg, cfg.seed, out);
  } catch (const ConfigError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  }
}
