#include "bathy/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "bathy/csv.hpp"
#include "bathy/errors.hpp"

namespace bathy::cli {

namespace fs = std::filesystem;

namespace {

struct Context {
  std::string source;
  int line = 0;
  fs::path base_dir;

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    msg << source << ":" << line << ": " << what;
    throw ConfigError(msg.str());
  }
};

double to_double(const std::string& v, const Context& ctx) {
  try {
    return csv::parse_double(v, ctx.source, ctx.line);
  } catch (const ParseError&) {
    ctx.fail("expected a number, got '" + v + "'");
  }
}

long long to_integer(const std::string& v, const Context& ctx) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    ctx.fail("expected an integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& v, const Context& ctx) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  ctx.fail("expected true/false, got '" + v + "'");
}

std::vector<double> to_double_list(const std::string& v, const Context& ctx) {
  std::vector<double> out;
  for (const auto& cell : csv::split(v)) out.push_back(to_double(cell, ctx));
  return out;
}

fs::path to_path(const std::string& v, const Context& ctx) {
  fs::path p = v;
  if (p.is_relative()) p = ctx.base_dir / p;
  return p.lexically_normal();
}

using Setter = std::function<void(RunConfig&, const std::string&, const Context&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"domain.L", [](RunConfig& c, const std::string& v, const Context& x) { c.L = to_double(v, x); }},
      {"domain.R", [](RunConfig& c, const std::string& v, const Context& x) { c.R = to_double(v, x); }},
      {"grid.M", [](RunConfig& c, const std::string& v, const Context& x) { c.M = static_cast<int>(to_integer(v, x)); }},
      {"time.dt", [](RunConfig& c, const std::string& v, const Context& x) { c.dt = to_double(v, x); }},
      {"time.T", [](RunConfig& c, const std::string& v, const Context& x) { c.T = to_double(v, x); }},
      {"physics.g", [](RunConfig& c, const std::string& v, const Context& x) { c.physics.g = to_double(v, x); }},
      {"physics.kappa", [](RunConfig& c, const std::string& v, const Context& x) { c.physics.kappa = to_double(v, x); }},
      {"physics.dealias", [](RunConfig& c, const std::string& v, const Context& x) { c.physics.dealias = to_bool(v, x); }},
      {"weights.gamma", [](RunConfig& c, const std::string& v, const Context& x) { c.weights.gamma = to_double(v, x); }},
      {"weights.delta", [](RunConfig& c, const std::string& v, const Context& x) { c.weights.delta = to_double(v, x); }},
      {"weights.lambda1", [](RunConfig& c, const std::string& v, const Context& x) { c.weights.lambda1 = to_double(v, x); }},
      {"weights.lambda2", [](RunConfig& c, const std::string& v, const Context& x) { c.weights.lambda2 = to_double(v, x); }},
      {"sensors.ids", [](RunConfig& c, const std::string& v, const Context& x) {
         try {
           c.sensor_ids = parse_id_list(v);
         } catch (const ConfigError& e) {
           x.fail(e.what());
         }
       }},
      {"sensors.positions", [](RunConfig& c, const std::string& v, const Context& x) { c.sensor_positions = to_double_list(v, x); }},
      {"sensors.variance", [](RunConfig& c, const std::string& v, const Context& x) { c.sensor_variance = to_double(v, x); }},
      {"optimizer.epsilon", [](RunConfig& c, const std::string& v, const Context& x) { c.optimizer.epsilon = to_double(v, x); }},
      {"optimizer.max_iters", [](RunConfig& c, const std::string& v, const Context& x) { c.optimizer.max_iters = static_cast<int>(to_integer(v, x)); }},
      {"optimizer.armijo_c", [](RunConfig& c, const std::string& v, const Context& x) { c.optimizer.armijo_c = to_double(v, x); }},
      {"optimizer.armijo_beta", [](RunConfig& c, const std::string& v, const Context& x) { c.optimizer.armijo_beta = to_double(v, x); }},
      {"optimizer.a_init", [](RunConfig& c, const std::string& v, const Context& x) { c.optimizer.a_init = to_double(v, x); }},
      {"optimizer.a_min", [](RunConfig& c, const std::string& v, const Context& x) { c.optimizer.a_min = to_double(v, x); }},
      {"optimizer.gradient_norm", [](RunConfig& c, const std::string& v, const Context& x) {
         if (v == "smoothed_l2") c.optimizer.norm = GradientNorm::SmoothedL2;
         else if (v == "nodal_raw") c.optimizer.norm = GradientNorm::NodalRaw;
         else x.fail("optimizer.gradient_norm must be smoothed_l2 or nodal_raw");
       }},
      {"twin.fine_M", [](RunConfig& c, const std::string& v, const Context& x) { c.fine_M = static_cast<int>(to_integer(v, x)); }},
      {"twin.fine_dt", [](RunConfig& c, const std::string& v, const Context& x) { c.fine_dt = to_double(v, x); }},
      {"twin.noise_fraction", [](RunConfig& c, const std::string& v, const Context& x) { c.noise_fraction = to_double(v, x); }},
      {"twin.seed", [](RunConfig& c, const std::string& v, const Context& x) {
         const long long s = to_integer(v, x);
         if (s < 0) x.fail("twin.seed must be non-negative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"twin.mode", [](RunConfig& c, const std::string& v, const Context& x) {
         if (v == "both") c.twin_mode = TwinMode::Both;
         else if (v == "full") c.twin_mode = TwinMode::FullField;
         else if (v == "sensors") c.twin_mode = TwinMode::Sensors;
         else x.fail("twin.mode must be both, full or sensors");
       }},
      {"observation.mode", [](RunConfig& c, const std::string& v, const Context& x) {
         if (v == "full") c.observation = ObservationKind::FullField;
         else if (v == "sensors") c.observation = ObservationKind::Sensors;
         else x.fail("observation.mode must be full or sensors");
       }},
      {"paths.forcing", [](RunConfig& c, const std::string& v, const Context& x) { c.forcing = to_path(v, x); }},
      {"paths.reference_bathymetry", [](RunConfig& c, const std::string& v, const Context& x) { c.reference_bathymetry = to_path(v, x); }},
      {"paths.observation_dir", [](RunConfig& c, const std::string& v, const Context& x) { c.observation_dir = to_path(v, x); }},
      {"paths.initial_bathymetry", [](RunConfig& c, const std::string& v, const Context& x) { c.initial_bathymetry = to_path(v, x); }},
      {"paths.output", [](RunConfig& c, const std::string& v, const Context& x) { c.output_dir = to_path(v, x); }},
  };
  return table;
}

}  // namespace

std::vector<int> parse_id_list(const std::string& text) {
  std::vector<int> ids;
  for (const auto& cell : csv::split(text)) {
    int id = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), id);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
      throw ConfigError("invalid sensor id '" + cell + "'");
    }
    ids.push_back(id);
  }
  return ids;
}

RunConfig parse_config(const std::string& text, const fs::path& base_dir, const std::string& source) {
  RunConfig cfg;
  Context ctx{source, 0, base_dir};
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++ctx.line;
    const auto hash = raw.find('#');
    const std::string_view line = csv::trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) ctx.fail("expected 'key = value'");
    const std::string key(csv::trim(line.substr(0, eq)));
    const std::string value(csv::trim(line.substr(eq + 1)));
    const auto it = setters().find(key);
    if (it == setters().end()) ctx.fail("unknown key '" + key + "'");
    if (!seen.insert(key).second) ctx.fail("duplicate key '" + key + "'");
    if (value.empty()) ctx.fail("empty value for '" + key + "'");
    it->second(cfg, value, ctx);
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path(), path.string());
}

void RunConfig::validate() const {
  // Grid and time axis.
  const Grid g(M, L, R);
  step_count(dt, T);
  physics.validate();
  weights.validate();
  optimizer.validate();

  if (sensor_ids.size() != sensor_positions.size()) {
    throw ConfigError("sensors.ids and sensors.positions must have the same length");
  }
  std::set<int> unique(sensor_ids.begin(), sensor_ids.end());
  if (unique.size() != sensor_ids.size()) throw ConfigError("sensors.ids must be unique");
  if (!sensor_positions.empty()) layout().validate(g);
  else if (!(sensor_variance > 0.0)) throw ConfigError("sensors.variance must be positive");

  if (!(fine_M > M)) throw ConfigError("twin.fine_M must exceed grid.M");
  if (!(fine_dt > 0.0 && fine_dt < dt)) throw ConfigError("twin.fine_dt must be in (0, time.dt)");
  step_count(fine_dt, T);
  if (!(noise_fraction >= 0.0)) throw ConfigError("twin.noise_fraction must be >= 0");
}

SensorLayout RunConfig::layout() const {
  SensorLayout l;
  l.positions = sensor_positions;
  l.variance = sensor_variance;
  return l;
}

std::vector<std::size_t> RunConfig::select_sensors(const std::vector<int>& ids) const {
  std::vector<std::size_t> out;
  for (int id : ids) {
    const auto it = std::find(sensor_ids.begin(), sensor_ids.end(), id);
    if (it == sensor_ids.end()) {
      throw ConfigError("unknown sensor " + std::to_string(id));
    }
    out.push_back(static_cast<std::size_t>(it - sensor_ids.begin()));
  }
  std::vector<std::size_t> sorted = out;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ConfigError("duplicate sensor in selection");
  }
  return sorted;
}

}  // namespace bathy::cli
