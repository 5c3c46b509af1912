#include "bathy/twin.hpp"

#include <cmath>
#include <sstream>

#include "bathy/errors.hpp"

namespace bathy {

namespace {

// Largest stride k <= ratio / 2 dividing n, so the stored fine samples are at
// least twice as dense as the coarse steps.
int storage_stride(int n_fine, double fine_dt, double coarse_dt) {
  int k = std::max(1, static_cast<int>(std::floor(0.5 * coarse_dt / fine_dt)));
  while (k > 1 && n_fine % k != 0) --k;
  return k;
}

}  // namespace

TwinObservations generate_twins(const Field& b_ex_fine, const BoundaryForcing& forcing,
                                const PhysParams& params, const TwinRequest& request) {
  const Grid& coarse = *request.coarse_grid;
  if (!(request.fine_M > coarse.size())) {
    throw ConfigError("twin: fine grid must have more nodes than the inversion grid");
  }
  if (!(request.fine_dt < request.coarse_dt)) {
    throw ConfigError("twin: fine time step must be smaller than the inversion time step");
  }
  if (b_ex_fine.size() != request.fine_M) {
    throw UsageError("twin: reference bathymetry is not sampled on the fine grid");
  }
  if (request.sensors) request.sensors->validate(coarse);

  auto fine = std::make_shared<const Grid>(request.fine_M, coarse.left(), coarse.right());
  const int n_fine = step_count(request.fine_dt, request.T);
  const int stride = storage_stride(n_fine, request.fine_dt, request.coarse_dt);
  ForwardOptions opts;
  opts.store_stride = stride;
  const Bathymetry b_ex{b_ex_fine};
  const Trajectory traj = run_forward(b_ex, forcing, params, fine, request.fine_dt, request.T, opts);
  const SpaceTimeField H = surface_elevation(traj, b_ex);

  std::vector<double> t_fine(traj.states.size());
  for (std::size_t n = 0; n < t_fine.size(); ++n) t_fine[n] = traj.time(static_cast<int>(n));
  const int n_coarse = step_count(request.coarse_dt, request.T);
  std::vector<double> t_coarse(static_cast<std::size_t>(n_coarse) + 1);
  for (int n = 0; n <= n_coarse; ++n) t_coarse[static_cast<std::size_t>(n)] = n * request.coarse_dt;

  // Time transfer of each column of `fine_values` (rows = fine stored steps).
  auto to_coarse_times = [&](const Eigen::MatrixXd& fine_values) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(t_coarse.size()), fine_values.cols());
    for (Eigen::Index c = 0; c < fine_values.cols(); ++c) {
      std::vector<double> col(fine_values.rows());
      for (Eigen::Index n = 0; n < fine_values.rows(); ++n) col[static_cast<std::size_t>(n)] = fine_values(n, c);
      const SampledCurve curve(t_fine, std::move(col));
      for (std::size_t n = 0; n < t_coarse.size(); ++n) {
        out(static_cast<Eigen::Index>(n), c) = curve(t_coarse[n]);
      }
    }
    return out;
  };

  TwinObservations out;
  if (request.full_field) {
    const Field& x = coarse.nodes();
    const Eigen::MatrixXd E = fine->evaluation_matrix(std::span<const double>(x.data(), x.size()));
    const Eigen::MatrixXd in_space = H * E.transpose();
    FullFieldObservation f;
    f.nodes = coarse.nodes();
    f.times = t_coarse;
    f.H = to_coarse_times(in_space);
    ObservationSet obs;
    obs.mode = ObservationMode::FullField;
    obs.full_field = std::move(f);
    out.full_field = std::move(obs);
  }
  if (request.sensors) {
    const Eigen::MatrixXd E = fine->evaluation_matrix(request.sensors->positions);
    const Eigen::MatrixXd at_sensors = to_coarse_times(H * E.transpose());
    std::vector<TimeSeries> series;
    for (Eigen::Index i = 0; i < at_sensors.cols(); ++i) {
      TimeSeries s;
      std::ostringstream label;
      label << "x=" << request.sensors->positions[static_cast<std::size_t>(i)];
      s.label = label.str();
      s.times = t_coarse;
      s.values.resize(t_coarse.size());
      for (std::size_t n = 0; n < t_coarse.size(); ++n) {
        s.values[n] = at_sensors(static_cast<Eigen::Index>(n), i);
      }
      series.push_back(std::move(s));
    }
    ObservationSet obs;
    obs.mode = ObservationMode::Sensors;
    obs.sensor_series = std::move(series);
    obs.layout = request.sensors;
    out.sensors = std::move(obs);
  }
  return out;
}

ObservationSet generate_twin(const Field& b_ex_fine, const BoundaryForcing& forcing,
                             const PhysParams& params, int fine_M, double fine_dt,
                             std::shared_ptr<const Grid> coarse_grid, double coarse_dt, double T,
                             ObservationMode mode, const std::optional<SensorLayout>& layout) {
  TwinRequest req;
  req.fine_M = fine_M;
  req.fine_dt = fine_dt;
  req.coarse_grid = std::move(coarse_grid);
  req.coarse_dt = coarse_dt;
  req.T = T;
  req.full_field = mode == ObservationMode::FullField;
  if (mode == ObservationMode::Sensors) {
    if (!layout) throw ConfigError("twin: sensor mode needs a sensor layout");
    req.sensors = layout;
  }
  TwinObservations both = generate_twins(b_ex_fine, forcing, params, req);
  return mode == ObservationMode::FullField ? std::move(*both.full_field)
                                            : std::move(*both.sensors);
}

}  // namespace bathy
