#include "bathy/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "bathy/csv.hpp"
#include "bathy/errors.hpp"

namespace bathy {

namespace fs = std::filesystem;

void TimeSeries::validate() const {
  if (times.size() != values.size()) {
    throw UsageError("time series '" + label + "': times and values differ in length");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(values[i])) {
      throw UsageError("time series '" + label + "': non-finite sample");
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      std::ostringstream msg;
      msg << "time series '" << label << "': times not strictly increasing at sample " << i;
      throw UsageError(msg.str());
    }
  }
}

TimeSeries load_sensor_series(const fs::path& path, const ColumnSpec& columns) {
  const csv::Table table = csv::read(path);
  const std::size_t ct = table.column(columns.time);
  const std::size_t cv = table.column(columns.value);

  TimeSeries ts;
  ts.label = path.stem().string();
  ts.times.reserve(table.rows.size());
  ts.values.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const int line = table.line_numbers[r];
    const double t = csv::parse_double(table.rows[r][ct], table.source, line);
    const double v = csv::parse_double(table.rows[r][cv], table.source, line);
    if (!std::isfinite(t) || !std::isfinite(v)) {
      std::ostringstream msg;
      msg << table.source << ":" << line << ": non-finite value";
      throw ParseError(msg.str());
    }
    if (!ts.times.empty() && !(t > ts.times.back())) {
      std::ostringstream msg;
      msg << table.source << ":" << line << ": time " << t
          << " is not strictly greater than the previous sample";
      throw ParseError(msg.str());
    }
    ts.times.push_back(t);
    ts.values.push_back(v);
  }
  if (ts.size() < 2) throw ParseError(table.source + ": need at least two samples");
  return ts;
}

void write_sensor_series(const fs::path& path, const TimeSeries& ts) {
  ts.validate();
  std::string out = "time_s,elevation_m\n";
  for (std::size_t i = 0; i < ts.size(); ++i) {
    out += csv::format(ts.times[i]);
    out += ',';
    out += csv::format(ts.values[i]);
    out += '\n';
  }
  csv::write_file(path, out);
}

void RunEnsemble::validate() const {
  if (runs.empty()) throw UsageError("ensemble: no runs");
  for (const auto& r : runs) {
    r.validate();
    if (r.times != runs.front().times) {
      throw UsageError("ensemble: run '" + r.label + "' does not share the common time axis");
    }
  }
}

RunEnsemble load_ensemble(const fs::path& manifest, const ColumnSpec& columns) {
  const csv::Table table = csv::read(manifest);
  const std::size_t cp = table.column("path");
  RunEnsemble e;
  for (const auto& row : table.rows) {
    fs::path p = row[cp];
    if (p.is_relative()) p = manifest.parent_path() / p;
    e.runs.push_back(load_sensor_series(p, columns));
  }
  e.validate();
  return e;
}

SampledCurve load_bathymetry_table(const fs::path& path) {
  const csv::Table table = csv::read(path);
  const std::size_t cx = table.column("x_m");
  const std::size_t cb = table.column("b_m");
  std::vector<double> x, b;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const int line = table.line_numbers[r];
    const double xv = csv::parse_double(table.rows[r][cx], table.source, line);
    const double bv = csv::parse_double(table.rows[r][cb], table.source, line);
    if (!std::isfinite(xv) || !std::isfinite(bv)) {
      std::ostringstream msg;
      msg << table.source << ":" << line << ": non-finite value";
      throw ParseError(msg.str());
    }
    if (!x.empty() && !(xv > x.back())) {
      std::ostringstream msg;
      msg << table.source << ":" << line << ": x not strictly increasing";
      throw ParseError(msg.str());
    }
    x.push_back(xv);
    b.push_back(bv);
  }
  if (x.size() < 2) throw ParseError(table.source + ": need at least two points");
  return SampledCurve(std::move(x), std::move(b));
}

void write_bathymetry(const fs::path& path, const Grid& grid, const Bathymetry& b) {
  if (b.values.size() != grid.size()) throw UsageError("write_bathymetry: size mismatch");
  std::string out = "x_m,b_m\n";
  for (int k = 0; k < grid.size(); ++k) {
    out += csv::format(grid.nodes()(k));
    out += ',';
    out += csv::format(b.values(k));
    out += '\n';
  }
  csv::write_file(path, out);
}

FullFieldObservation load_full_field(const fs::path& path) {
  const csv::Table table = csv::read(path);
  if (table.header.size() < 3 || table.header.front() != "t_s") {
    throw ParseError(table.source + ": full-field header must start with t_s followed by nodes");
  }
  if (table.rows.size() < 3) {
    throw ParseError(table.source + ": need a node row and at least two time rows");
  }
  const auto M = static_cast<Eigen::Index>(table.header.size() - 1);
  FullFieldObservation obs;
  obs.nodes.resize(M);
  for (Eigen::Index k = 0; k < M; ++k) {
    obs.nodes(k) = csv::parse_double(table.rows[0][static_cast<std::size_t>(k) + 1], table.source,
                                     table.line_numbers[0]);
  }
  const auto nt = static_cast<Eigen::Index>(table.rows.size() - 1);
  obs.H.resize(nt, M);
  obs.times.reserve(static_cast<std::size_t>(nt));
  for (Eigen::Index n = 0; n < nt; ++n) {
    const auto& row = table.rows[static_cast<std::size_t>(n) + 1];
    const int line = table.line_numbers[static_cast<std::size_t>(n) + 1];
    const double t = csv::parse_double(row[0], table.source, line);
    if (!obs.times.empty() && !(t > obs.times.back())) {
      std::ostringstream msg;
      msg << table.source << ":" << line << ": time not strictly increasing";
      throw ParseError(msg.str());
    }
    obs.times.push_back(t);
    for (Eigen::Index k = 0; k < M; ++k) {
      const double v = csv::parse_double(row[static_cast<std::size_t>(k) + 1], table.source, line);
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << table.source << ":" << line << ": non-finite value";
        throw ParseError(msg.str());
      }
      obs.H(n, k) = v;
    }
  }
  return obs;
}

void write_full_field(const fs::path& path, const FullFieldObservation& obs) {
  const Eigen::Index M = obs.nodes.size();
  if (obs.H.cols() != M || obs.H.rows() != static_cast<Eigen::Index>(obs.times.size())) {
    throw UsageError("write_full_field: inconsistent shapes");
  }
  std::string out = "t_s";
  for (Eigen::Index k = 0; k < M; ++k) out += ",x_" + std::to_string(k);
  out += "\nnan";
  for (Eigen::Index k = 0; k < M; ++k) out += ',' + csv::format(obs.nodes(k));
  out += '\n';
  for (Eigen::Index n = 0; n < obs.H.rows(); ++n) {
    out += csv::format(obs.times[static_cast<std::size_t>(n)]);
    for (Eigen::Index k = 0; k < M; ++k) out += ',' + csv::format(obs.H(n, k));
    out += '\n';
  }
  csv::write_file(path, out);
}

void ObservationSet::validate() const {
  if (mode == ObservationMode::FullField) {
    if (!full_field || sensor_series || layout) {
      throw UsageError("observation: full-field mode must carry only the full field");
    }
    const auto& f = *full_field;
    if (f.H.rows() != static_cast<Eigen::Index>(f.times.size()) || f.H.cols() != f.nodes.size()) {
      throw UsageError("observation: full-field shape mismatch");
    }
  } else {
    if (full_field || !sensor_series || !layout) {
      throw UsageError("observation: sensor mode needs series and a layout, and no full field");
    }
    if (sensor_series->size() != layout->positions.size()) {
      throw UsageError("observation: number of series differs from the number of sensor positions");
    }
    for (const auto& s : *sensor_series) s.validate();
  }
}

namespace {

std::vector<double> time_axis(double dt, double T) {
  const int n = step_count(dt, T);
  std::vector<double> t(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) t[static_cast<std::size_t>(i)] = i * dt;
  return t;
}

void require_coverage(const std::vector<double>& times, double T, const std::string& what) {
  const double slack = 1e-12 * std::max(T, 1.0);
  if (times.empty() || times.front() > slack || times.back() < T - slack) {
    std::ostringstream msg;
    msg << what << " does not cover [0, " << T << "]";
    throw DomainError(msg.str());
  }
}

// Grid matching a stored node row; UsageError unless the nodes are Gauss-Lobatto.
Grid grid_for_nodes(const Field& nodes) {
  const auto M = static_cast<int>(nodes.size());
  Grid g(M, nodes(0), nodes(M - 1));
  const double tol = 1e-9 * g.length();
  if ((g.nodes() - nodes).cwiseAbs().maxCoeff() > tol) {
    throw UsageError("full-field observation nodes are not Chebyshev-Gauss-Lobatto points");
  }
  return g;
}

}  // namespace

ObservationSet resample_observation(const ObservationSet& obs, const Grid& target, double dt,
                                    double T) {
  obs.validate();
  const std::vector<double> t_new = time_axis(dt, T);
  ObservationSet out;
  out.mode = obs.mode;

  if (obs.mode == ObservationMode::FullField) {
    const auto& src = *obs.full_field;
    require_coverage(src.times, T, "full-field observation");
    const Grid src_grid = grid_for_nodes(src.nodes);
    if (!src_grid.same_domain(target, 1e-9)) {
      throw UsageError("resample: observation domain differs from the target grid");
    }
    const auto nt = static_cast<Eigen::Index>(t_new.size());
    SpaceTimeField in_time(nt, src.nodes.size());
    for (Eigen::Index k = 0; k < src.nodes.size(); ++k) {
      std::vector<double> column(src.times.size());
      for (std::size_t n = 0; n < column.size(); ++n) {
        column[n] = src.H(static_cast<Eigen::Index>(n), k);
      }
      const SampledCurve c(src.times, std::move(column));
      for (Eigen::Index n = 0; n < nt; ++n) in_time(n, k) = c(t_new[static_cast<std::size_t>(n)]);
    }
    const Field& x = target.nodes();
    const Eigen::MatrixXd E =
        src_grid.evaluation_matrix(std::span<const double>(x.data(), x.size()));
    FullFieldObservation f;
    f.nodes = target.nodes();
    f.times = t_new;
    f.H = in_time * E.transpose();
    out.full_field = std::move(f);
  } else {
    std::vector<TimeSeries> series;
    for (const auto& s : *obs.sensor_series) {
      require_coverage(s.times, T, "sensor series '" + s.label + "'");
      TimeSeries r;
      r.label = s.label;
      r.times = t_new;
      r.values = spline_eval(s.curve(), t_new);
      series.push_back(std::move(r));
    }
    out.sensor_series = std::move(series);
    out.layout = obs.layout;
  }
  return out;
}

double observed_amplitude(const ObservationSet& obs) {
  obs.validate();
  double amp = 0.0;
  if (obs.mode == ObservationMode::FullField) {
    const auto& H = obs.full_field->H;
    for (Eigen::Index k = 0; k < H.cols(); ++k) {
      amp = std::max(amp, 0.5 * (H.col(k).maxCoeff() - H.col(k).minCoeff()));
    }
  } else {
    for (const auto& s : *obs.sensor_series) {
      const auto [lo, hi] = std::minmax_element(s.values.begin(), s.values.end());
      amp = std::max(amp, 0.5 * (*hi - *lo));
    }
  }
  return amp;
}

ObservationSet add_noise(const ObservationSet& obs, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0)) throw ConfigError("noise fraction must be >= 0");
  ObservationSet out = obs;
  if (fraction == 0.0) return out;
  const double sigma = fraction * observed_amplitude(obs);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  if (out.mode == ObservationMode::FullField) {
    auto& H = out.full_field->H;
    for (Eigen::Index n = 0; n < H.rows(); ++n) {
      for (Eigen::Index k = 0; k < H.cols(); ++k) H(n, k) += noise(rng);
    }
  } else {
    for (auto& s : *out.sensor_series) {
      for (double& v : s.values) v += noise(rng);
    }
  }
  return out;
}

DataMisfit make_misfit(const ObservationSet& aligned, std::shared_ptr<const Grid> grid,
                       const std::vector<std::size_t>& selected) {
  aligned.validate();
  if (aligned.mode == ObservationMode::FullField) {
    const auto& f = *aligned.full_field;
    if (f.nodes.size() != grid->size() ||
        (f.nodes - grid->nodes()).cwiseAbs().maxCoeff() > 1e-9 * grid->length()) {
      throw UsageError("make_misfit: full-field observation is not on the solver grid");
    }
    return DataMisfit::full_field(std::move(grid), f.H);
  }

  const auto& all = *aligned.sensor_series;
  std::vector<std::size_t> idx = selected;
  if (idx.empty()) {
    for (std::size_t i = 0; i < all.size(); ++i) idx.push_back(i);
  }
  SensorLayout layout;
  layout.variance = aligned.layout->variance;
  const auto nt = static_cast<Eigen::Index>(all.front().size());
  SpaceTimeField obs(nt, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    if (idx[j] >= all.size()) throw UsageError("make_misfit: sensor index out of range");
    const auto& s = all[idx[j]];
    if (static_cast<Eigen::Index>(s.size()) != nt) {
      throw UsageError("make_misfit: sensor series have different lengths");
    }
    layout.positions.push_back(aligned.layout->positions[idx[j]]);
    for (Eigen::Index n = 0; n < nt; ++n) {
      obs(n, static_cast<Eigen::Index>(j)) = s.values[static_cast<std::size_t>(n)];
    }
  }
  return DataMisfit::sensors(std::move(grid), std::move(layout), std::move(obs));
}

}  // namespace bathy
