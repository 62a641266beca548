#include "gfsem/config.hpp"

#include "gfsem/dec_time.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace gfsem {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != static_cast<int>(d)) throw ConfigError("key '" + key + "': expected an integer");
  return static_cast<int>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("key '" + key + "': expected a boolean, got '" + v + "'");
}

// "10,20,40" or "13x13, 26x26".
std::vector<std::pair<int, int>> to_meshes(const std::string& key, const std::string& v) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto x = item.find('x');
    int nx, ny;
    if (x == std::string::npos) {
      nx = ny = to_int(key, item);
    } else {
      nx = to_int(key, trim(item.substr(0, x)));
      ny = to_int(key, trim(item.substr(x + 1)));
    }
    if (nx < 1 || ny < 1) throw ConfigError("key '" + key + "': cell counts must be positive");
    out.emplace_back(nx, ny);
  }
  if (out.empty()) throw ConfigError("key '" + key + "': mesh list is empty");
  return out;
}

}  // namespace

Formulation parse_formulation(const std::string& s) {
  if (s == "gf" || s == "global_flux" || s == "global-flux") return Formulation::global_flux;
  if (s == "standard") return Formulation::standard;
  throw ConfigError("unknown formulation '" + s + "'");
}

Stabilization parse_stabilization(const std::string& s) {
  if (s == "su") return Stabilization::su;
  if (s == "oss") return Stabilization::oss;
  if (s == "none") return Stabilization::none;
  throw ConfigError("unknown stabilization '" + s + "'");
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig c;
  std::stringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (c.raw.count(key)) throw ConfigError("duplicate key '" + key + "'");
    c.raw[key] = val;
  }

  for (const auto& [key, val] : c.raw) {
    if (key == "problem.name") c.problem = val;
    else if (key.rfind("problem.", 0) == 0) c.problem_params[key.substr(8)] = to_double(key, val);
    else if (key == "scheme.formulation") c.formulation = parse_formulation(val);
    else if (key == "scheme.stabilization") c.stabilization = parse_stabilization(val);
    else if (key == "scheme.alpha") c.alpha = to_double(key, val);
    else if (key == "grid.K") c.K = to_int(key, val);
    else if (key == "grid.meshes") c.meshes = to_meshes(key, val);
    else if (key == "time.cfl") c.cfl = to_double(key, val);
    else if (key == "time.T") c.T = to_double(key, val);
    else if (key == "time.sample_interval") c.sample_interval = to_double(key, val);
    else if (key == "init.method") c.init_method = val;
    else if (key == "init.lambda") c.init_lambda = to_double(key, val);
    else if (key == "init.settle_time") c.settle_time = to_double(key, val);
    else if (key == "init.file") c.init_file = val;
    else if (key == "perturbation.epsilon") { c.eps = to_double(key, val); c.perturb = true; }
    else if (key == "perturbation.x") c.px = to_double(key, val);
    else if (key == "perturbation.y") c.py = to_double(key, val);
    else if (key == "perturbation.r0") c.r0 = to_double(key, val);
    else if (key == "output.dir") c.output_dir = val;
    else if (key == "diagnostics.divergence") c.track_divergence = to_bool(key, val);
    else throw ConfigError("unknown key '" + key + "'");
  }

  static const std::set<std::string> methods{"interpolate", "line_by_line", "optimize", "long_run",
                                             "from_file"};
  if (!methods.count(c.init_method)) throw ConfigError("unknown init.method '" + c.init_method + "'");
  if (c.init_method == "from_file" && c.init_file.empty())
    throw ConfigError("init.method = from_file needs init.file");
  if (c.K < 1) throw ConfigError("grid.K must be at least 1");
  if (!(c.T > 0.0)) throw ConfigError("time.T must be positive");
  if (c.alpha && *c.alpha < 0.0) throw ConfigError("scheme.alpha must be non-negative");
  if (c.cfl && !(*c.cfl > 0.0)) throw ConfigError("time.cfl must be positive");
  if (c.sample_interval < 0.0) throw ConfigError("time.sample_interval must be non-negative");
  if (c.perturb && !(c.r0 > 0.0)) throw ConfigError("perturbation.r0 must be positive");
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse(ss.str());
}

double ExperimentConfig::cfl_value() const { return cfl ? *cfl : DeCConfig::default_cfl(K); }

SchemeConfig ExperimentConfig::scheme_for(const Grid2D& g) const {
  SchemeConfig s = SchemeConfig::make(formulation, stabilization, g);
  if (alpha) s.alpha = *alpha;
  return s;
}

}  // namespace gfsem
