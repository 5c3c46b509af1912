#include "bathy/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "bathy/csv.hpp"
#include "bathy/data_io.hpp"
#include "bathy/errors.hpp"
#include "bathy/optimizer.hpp"
#include "bathy/twin.hpp"

namespace bathy::cli {

namespace fs = std::filesystem;

namespace {

void require_file(const fs::path& p, const char* key) {
  if (p.empty()) throw ConfigError(std::string(key) + " is not set");
  if (!fs::is_regular_file(p)) {
    throw ConfigError(std::string(key) + ": file not found: " + p.string());
  }
}

BoundaryForcing load_forcing(const RunConfig& cfg) {
  require_file(cfg.forcing, "paths.forcing");
  BoundaryForcing forcing(load_sensor_series(cfg.forcing).curve());
  if (!forcing.covers(0.0, cfg.T)) {
    std::ostringstream msg;
    msg << cfg.forcing.string() << ": forcing does not cover [0, " << cfg.T << "] s";
    throw DomainError(msg.str());
  }
  return forcing;
}

Field sample_on(const SampledCurve& curve, const Grid& g) {
  Field out(g.size());
  for (int k = 0; k < g.size(); ++k) out(k) = curve(g.nodes()(k));
  return out;
}

Field load_reference(const RunConfig& cfg, const Grid& g) {
  require_file(cfg.reference_bathymetry, "paths.reference_bathymetry");
  return sample_on(load_bathymetry_table(cfg.reference_bathymetry), g);
}

fs::path sensor_file(const fs::path& dir, int id) {
  return dir / ("observation_sensor_" + std::to_string(id) + ".csv");
}

std::string history_csv(const ReconstructionResult& res) {
  std::string out = "iteration,J,grad_norm,step,trials,status\n";
  for (std::size_t i = 0; i < res.history.size(); ++i) {
    const IterationRecord& r = res.history[i];
    out += std::to_string(r.iteration) + ',' + csv::format(r.objective) + ',' +
           csv::format(r.grad_norm) + ',' + csv::format(r.step) + ',' +
           std::to_string(r.trials) + ',';
    out += i + 1 == res.history.size() ? std::string(to_string(res.termination)) : "step";
    out += '\n';
  }
  return out;
}

}  // namespace

void cmd_forward(const RunConfig& cfg, const Streams& io) {
  const auto grid = std::make_shared<const Grid>(cfg.M, cfg.L, cfg.R);
  const BoundaryForcing forcing = load_forcing(cfg);
  const Bathymetry b{cfg.reference_bathymetry.empty() ? Field(Field::Zero(cfg.M))
                                                      : load_reference(cfg, *grid)};
  ForwardOptions opts;
  opts.warn = [&](std::string_view msg) { io.err << "warning: " << msg << '\n'; };
  const Trajectory traj = run_forward(b, forcing, cfg.physics, grid, cfg.dt, cfg.T, opts);
  const SpaceTimeField H = surface_elevation(traj, b);

  FullFieldObservation field{grid->nodes(), {}, H};
  for (int n = 0; n <= traj.n_steps; ++n) field.times.push_back(traj.time(n));
  write_full_field(cfg.output_dir / "surface_field.csv", field);

  const SensorLayout layout = cfg.layout();
  std::vector<Eigen::RowVectorXd> rows;
  for (double x : layout.positions) rows.push_back(grid->evaluation_row(x));
  std::string out = "time_s";
  for (int id : cfg.sensor_ids) out += ",sensor_" + std::to_string(id);
  out += '\n';
  for (int n = 0; n <= traj.n_steps; ++n) {
    out += csv::format(traj.time(n));
    for (const auto& row : rows) out += ',' + csv::format(row.dot(H.row(n)));
    out += '\n';
  }
  csv::write_file(cfg.output_dir / "surface_sensors.csv", out);
  io.out << "forward: " << traj.n_steps << " steps, max CFL " << traj.max_cfl << ", wrote "
         << cfg.output_dir.string() << '\n';
}

void cmd_twin(const RunConfig& cfg, const Streams& io) {
  const auto grid = std::make_shared<const Grid>(cfg.M, cfg.L, cfg.R);
  const BoundaryForcing forcing = load_forcing(cfg);
  require_file(cfg.reference_bathymetry, "paths.reference_bathymetry");
  const Grid fine(cfg.fine_M, cfg.L, cfg.R);
  const Field b_ex_fine = sample_on(load_bathymetry_table(cfg.reference_bathymetry), fine);

  TwinRequest req;
  req.fine_M = cfg.fine_M;
  req.fine_dt = cfg.fine_dt;
  req.coarse_grid = grid;
  req.coarse_dt = cfg.dt;
  req.T = cfg.T;
  req.full_field = cfg.twin_mode != TwinMode::Sensors;
  if (cfg.twin_mode != TwinMode::FullField) {
    if (cfg.sensor_positions.empty()) throw ConfigError("twin: no sensors configured");
    req.sensors = cfg.layout();
  }
  TwinObservations twins = generate_twins(b_ex_fine, forcing, cfg.physics, req);

  std::string meta = "key,value\n";
  meta += "seed," + std::to_string(cfg.seed) + '\n';
  meta += "noise_fraction," + csv::format(cfg.noise_fraction) + '\n';
  meta += "noise_generator," + std::string(kNoiseGenerator) + '\n';
  meta += "fine_M," + std::to_string(cfg.fine_M) + '\n';
  meta += "fine_dt," + csv::format(cfg.fine_dt) + '\n';
  meta += "M," + std::to_string(cfg.M) + '\n';
  meta += "dt," + csv::format(cfg.dt) + '\n';
  meta += "T," + csv::format(cfg.T) + '\n';

  if (twins.full_field) {
    ObservationSet obs = add_noise(*twins.full_field, cfg.noise_fraction, cfg.seed);
    meta += "full_field_noise_std," +
            csv::format(cfg.noise_fraction * observed_amplitude(*twins.full_field)) + '\n';
    write_full_field(cfg.output_dir / "observation_full.csv", *obs.full_field);
  }
  if (twins.sensors) {
    ObservationSet obs = add_noise(*twins.sensors, cfg.noise_fraction, cfg.seed);
    meta += "sensor_noise_std," +
            csv::format(cfg.noise_fraction * observed_amplitude(*twins.sensors)) + '\n';
    const auto& series = *obs.sensor_series;
    for (std::size_t i = 0; i < series.size(); ++i) {
      write_sensor_series(sensor_file(cfg.output_dir, cfg.sensor_ids[i]), series[i]);
    }
  }
  csv::write_file(cfg.output_dir / "twin_meta.csv", meta);
  io.out << "twin: wrote " << cfg.output_dir.string() << '\n';
}

void cmd_reconstruct(const RunConfig& cfg, const std::vector<int>& sensors, const Streams& io) {
  const auto grid = std::make_shared<const Grid>(cfg.M, cfg.L, cfg.R);
  const BoundaryForcing forcing = load_forcing(cfg);
  if (cfg.observation_dir.empty()) throw ConfigError("paths.observation_dir is not set");

  ObservationSet obs;
  if (cfg.observation == ObservationKind::FullField) {
    if (!sensors.empty()) throw UsageError("--sensors requires observation.mode = sensors");
    const fs::path p = cfg.observation_dir / "observation_full.csv";
    require_file(p, "full-field observation");
    obs.mode = ObservationMode::FullField;
    obs.full_field = load_full_field(p);
  } else {
    const std::vector<int> ids = sensors.empty() ? cfg.sensor_ids : sensors;
    if (ids.empty()) throw ConfigError("reconstruct: no sensors configured");
    const std::vector<std::size_t> idx = cfg.select_sensors(ids);
    obs.mode = ObservationMode::Sensors;
    SensorLayout layout;
    layout.variance = cfg.sensor_variance;
    std::vector<TimeSeries> series;
    for (std::size_t i : idx) {
      const fs::path p = sensor_file(cfg.observation_dir, cfg.sensor_ids[i]);
      require_file(p, "sensor observation");
      series.push_back(load_sensor_series(p));
      layout.positions.push_back(cfg.sensor_positions[i]);
    }
    obs.sensor_series = std::move(series);
    obs.layout = layout;
  }
  const ObservationSet aligned = resample_observation(obs, *grid, cfg.dt, cfg.T);

  Bathymetry b0 = Bathymetry::zero(*grid);
  if (!cfg.initial_bathymetry.empty()) {
    require_file(cfg.initial_bathymetry, "paths.initial_bathymetry");
    b0.values = sample_on(load_bathymetry_table(cfg.initial_bathymetry), *grid);
  }

  InverseProblem problem{grid, forcing, cfg.physics, cfg.weights, make_misfit(aligned, grid),
                         cfg.dt, cfg.T};
  const ReconstructionResult res = reconstruct(problem, b0, cfg.optimizer,
                                               [&](const IterationRecord& r) {
    io.err << "iter " << r.iteration << "  J " << r.objective << "  |v| " << r.grad_norm
           << "  step " << r.step << "  trials " << r.trials << '\n';
  });

  write_bathymetry(cfg.output_dir / "bathymetry_final.csv", *grid, res.b_final);
  csv::write_file(cfg.output_dir / "history.csv", history_csv(res));
  io.out << "reconstruct: " << to_string(res.termination) << " after "
         << res.history.size() - 1 << " iterations";
  if (!cfg.reference_bathymetry.empty()) {
    const ErrorReport e = bathymetry_errors(res.b_final.values, load_reference(cfg, *grid));
    csv::write_file(cfg.output_dir / "errors.csv",
                    std::string(ErrorReport::kCsvHeader) + '\n' + e.csv_row() + '\n');
    io.out << ", NRMSE " << e.nrmse_pct << " %";
  }
  io.out << '\n';
}

ErrorReport cmd_metrics(const RunConfig& cfg, const fs::path& b, const fs::path& b_ex) {
  const Grid grid(cfg.M, cfg.L, cfg.R);
  require_file(b, "bathymetry");
  require_file(b_ex, "reference bathymetry");
  return bathymetry_errors(sample_on(load_bathymetry_table(b), grid),
                           sample_on(load_bathymetry_table(b_ex), grid));
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bathymetry reconstruction from free-surface observations"};
  app.require_subcommand(1);
  std::string config_path;
  std::string output_override;
  std::string sensor_list;
  std::string b_path;
  std::string b_ex_path;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config_path, "Run configuration file");
    if (config_required) opt->required();
    sub->add_option("--output", output_override, "Output directory (overrides paths.output)");
  };
  CLI::App* forward = app.add_subcommand("forward", "Forward simulation");
  add_common(forward, true);
  CLI::App* twin = app.add_subcommand("twin", "Synthetic observations from the reference");
  add_common(twin, true);
  CLI::App* recon = app.add_subcommand("reconstruct", "Bathymetry reconstruction");
  add_common(recon, true);
  recon->add_option("--sensors", sensor_list, "Comma-separated sensor ids");
  CLI::App* metrics = app.add_subcommand("metrics", "Error metrics of b against b_ex");
  metrics->add_option("b", b_path, "Bathymetry table")->required();
  metrics->add_option("b_ex", b_ex_path, "Reference bathymetry table")->required();
  metrics->add_option("--config", config_path, "Configuration providing the grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  const Streams io{out, err};
  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (!output_override.empty()) cfg.output_dir = output_override;
    if (*forward) {
      cmd_forward(cfg, io);
    } else if (*twin) {
      cmd_twin(cfg, io);
    } else if (*recon) {
      const std::vector<int> ids = sensor_list.empty() ? std::vector<int>{}
                                                       : parse_id_list(sensor_list);
      cmd_reconstruct(cfg, ids, io);
    } else if (*metrics) {
      out << cmd_metrics(cfg, b_path, b_ex_path).csv_row() << '\n';
    }
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace bathy::cli
