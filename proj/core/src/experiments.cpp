#include "gfsem/experiment.hpp"

#include <array>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

namespace gfsem {
namespace {

// Calls f(t, q) at t = 0 and whenever another sample interval has elapsed.
class Sampler {
public:
  Sampler(double interval, double T) : interval_(interval), T_(T) {}
  bool due(double t) {
    if (interval_ <= 0.0 || t >= T_ * (1 - 1e-14) || t >= next_ - 1e-12 * std::max(1.0, T_)) {
      while (interval_ > 0.0 && next_ <= t + 1e-12 * std::max(1.0, T_)) next_ += interval_;
      return true;
    }
    return false;
  }

private:
  double interval_, T_;
  double next_ = 0.0;
};

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string fmt_err(double v) {
  if (std::isnan(v)) return "nan";
  return fmt(v);
}

Field velocity_difference(const State& a, const State& b) {
  const Eigen::ArrayXXd du = a.u.values - b.u.values;
  const Eigen::ArrayXXd dv = a.v.values - b.v.values;
  return Field(a.grid(), (du.square() + dv.square()).sqrt().matrix());
}

State perturbed(const State& eq, const ExperimentConfig& cfg) {
  State q = eq;
  if (cfg.perturb) q.p += interpolate(q.grid(), pressure_perturbation(cfg.eps, cfg.px, cfg.py, cfg.r0));
  return q;
}

}  // namespace

double divergence_norm(const State& q, const SourceFields& s, Formulation f) {
  const GridPtr& gp = q.grid();
  const Grid2D& g = *gp;
  Eigen::MatrixXd weak;
  if (f == Formulation::global_flux) {
    weak = gf_divergence(compute_gf_vars(q, s)).values;
  } else {
    weak = galerkin_standard(q, s).p.values;
  }
  return l2_norm(Field(gp, apply_mass_inv(g, weak)), true);
}

GridPtr grid_for(const ExperimentConfig& cfg, const ProblemSpec& problem, int mesh_index) {
  const auto [nx, ny] = cfg.meshes.at(mesh_index);
  const bool periodic = problem.bc == BoundaryMode::periodic;
  return make_grid(cfg.K, nx, ny, problem.domain, periodic, periodic);
}

State initial_state(const ExperimentConfig& cfg, const ProblemSpec& problem, const GridPtr& grid,
                    ProjectionReport* report) {
  const std::string& m = cfg.init_method;
  if (m == "interpolate") {
    if (!problem.exact) throw ConfigError("init.method = interpolate needs an exact solution");
    return sample_state(grid, problem.exact, 0.0);
  }
  if (m == "line_by_line") return line_by_line_projection(problem, grid, cfg.init_lambda, report);
  if (m == "optimize") return optimization_projection(problem, grid, nullptr, cfg.init_lambda, report);
  if (m == "long_run")
    return from_long_run(problem, cfg.scheme_for(*grid), grid, cfg.settle_time, cfg.cfl_value());
  if (m == "from_file") return read_state(cfg.init_file, grid);
  throw ConfigError("unknown init.method '" + m + "'");
}

void compute_orders(std::vector<ConvergenceRow>& rows) {
  auto order = [](double ep, double ec, int np, int nc) {
    if (!(ep > 0.0) || !(ec > 0.0) || np == nc) return static_cast<double>(NAN);
    return std::log(ep / ec) / std::log(static_cast<double>(nc) / np);
  };
  for (size_t i = 0; i < rows.size(); ++i) {
    ConvergenceRow& r = rows[i];
    if (i == 0) {
      r.ord_u = r.ord_v = r.ord_p = NAN;
      r.mord_u = r.mord_v = r.mord_p = NAN;
      continue;
    }
    const ConvergenceRow& q = rows[i - 1];
    r.ord_u = order(q.err_u, r.err_u, q.N, r.N);
    r.ord_v = order(q.err_v, r.err_v, q.N, r.N);
    r.ord_p = order(q.err_p, r.err_p, q.N, r.N);
    r.mord_u = order(q.max_u, r.max_u, q.N, r.N);
    r.mord_v = order(q.max_v, r.max_v, q.N, r.N);
    r.mord_p = order(q.max_p, r.max_p, q.N, r.N);
  }
}

std::vector<ConvergenceRow> run_convergence(const ExperimentConfig& cfg, int threads) {
  const ProblemSpec problem = make_problem(cfg.problem, cfg.problem_params);
  if (!problem.exact) throw ConfigError("convergence study needs an exact solution");
  const int n = static_cast<int>(cfg.meshes.size());
  std::vector<ConvergenceRow> rows(n);

  auto work = [&](int i) {
    const GridPtr grid = grid_for(cfg, problem, i);
    ConvergenceRow& row = rows[i];
    row.N = cfg.meshes[i].first;
    try {
      AcousticSystem sys(problem, grid, cfg.scheme_for(*grid));
      DeCConfig dec = DeCConfig::for_degree(cfg.K);
      dec.cfl = cfg.cfl_value();
      const State q0 = initial_state(cfg, problem, grid);
      if (problem.steady) sys.freeze_boundary(q0);
      const State q = run_dec(sys, q0, cfg.T, time_step(*grid, dec.cfl), dec);
      const State ex = sample_state(grid, problem.exact, cfg.T);
      row.err_u = l2_norm(q.u - ex.u);
      row.err_v = l2_norm(q.v - ex.v);
      row.err_p = l2_norm(q.p - ex.p);
      row.max_u = (q.u - ex.u).values.cwiseAbs().maxCoeff();
      row.max_v = (q.v - ex.v).values.cwiseAbs().maxCoeff();
      row.max_p = (q.p - ex.p).values.cwiseAbs().maxCoeff();
    } catch (const BlowUpError&) {
      row.blew_up = true;
      row.err_u = row.err_v = row.err_p = NAN;
      row.max_u = row.max_v = row.max_p = NAN;
    }
  };

  const int workers = std::max(1, std::min(threads, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) work(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (int i = next++; i < n; i = next++) work(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  compute_orders(rows);
  return rows;
}

std::vector<TimeSample> run_divergence_tracking(const ExperimentConfig& cfg) {
  const ProblemSpec problem = make_problem(cfg.problem, cfg.problem_params);
  const GridPtr grid = grid_for(cfg, problem, 0);
  AcousticSystem sys(problem, grid, cfg.scheme_for(*grid));
  DeCConfig dec = DeCConfig::for_degree(cfg.K);
  dec.cfl = cfg.cfl_value();
  const State eq = initial_state(cfg, problem, grid);
  if (problem.steady) sys.freeze_boundary(eq);
  const State q0 = perturbed(eq, cfg);

  std::vector<TimeSample> series;
  Sampler sampler(cfg.sample_interval, cfg.T);
  auto record = [&](double t, const State& q) {
    series.push_back({t, divergence_norm(q, sys.sources(q, t), cfg.formulation)});
  };
  sampler.due(0.0);
  record(0.0, q0);
  run_dec<AcousticSystem, State>(sys, q0, cfg.T, time_step(*grid, dec.cfl), dec,
                                 [&](long, double t, const State& q) {
                                   if (sampler.due(t)) record(t, q);
                                 });
  return series;
}

PerturbationResult run_perturbation(const ExperimentConfig& cfg) {
  const ProblemSpec problem = make_problem(cfg.problem, cfg.problem_params);
  const GridPtr grid = grid_for(cfg, problem, 0);
  AcousticSystem sys(problem, grid, cfg.scheme_for(*grid));
  DeCConfig dec = DeCConfig::for_degree(cfg.K);
  dec.cfl = cfg.cfl_value();

  PerturbationResult res;
  res.equilibrium = initial_state(cfg, problem, grid);
  if (problem.steady) sys.freeze_boundary(res.equilibrium);
  const State q0 = perturbed(res.equilibrium, cfg);
  Sampler sampler(cfg.sample_interval, cfg.T);
  auto record = [&](double t, const State& q) {
    Field d = velocity_difference(q, res.equilibrium);
    res.max_difference.push_back({t, d.values.cwiseAbs().maxCoeff()});
    res.snapshots.emplace_back(t, std::move(d));
  };
  sampler.due(0.0);
  record(0.0, q0);
  res.final_state = run_dec<AcousticSystem, State>(
      sys, q0, cfg.T, time_step(*grid, dec.cfl), dec, [&](long, double t, const State& q) {
        if (sampler.due(t)) record(t, q);
      });
  return res;
}

SolveResult run_solve(const ExperimentConfig& cfg) {
  const ProblemSpec problem = make_problem(cfg.problem, cfg.problem_params);
  const GridPtr grid = grid_for(cfg, problem, 0);
  AcousticSystem sys(problem, grid, cfg.scheme_for(*grid));
  DeCConfig dec = DeCConfig::for_degree(cfg.K);
  dec.cfl = cfg.cfl_value();
  const State eq = initial_state(cfg, problem, grid);
  if (problem.steady) sys.freeze_boundary(eq);
  const State q0 = perturbed(eq, cfg);

  SolveResult res;
  Sampler sampler(cfg.sample_interval, cfg.T);
  auto record = [&](double t, const State& q) {
    if (cfg.track_divergence)
      res.divergence.push_back({t, divergence_norm(q, sys.sources(q, t), cfg.formulation)});
  };
  sampler.due(0.0);
  record(0.0, q0);
  res.final_state = run_dec<AcousticSystem, State>(
      sys, q0, cfg.T, time_step(*grid, dec.cfl), dec, [&](long n, double t, const State& q) {
        res.steps = n;
        if (sampler.due(t)) record(t, q);
      });
  return res;
}

void ensure_writable_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path probe = fs::path(dir) / ".write_probe";
  std::ofstream os(probe);
  if (ec || !os) throw ConfigError("output directory '" + dir + "' is not writable");
  os.close();
  fs::remove(probe, ec);
}

void write_convergence_csv(const std::string& path, const std::vector<ConvergenceRow>& rows,
                           bool max_norm) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "N,err_u,err_v,err_p,ord_u,ord_v,ord_p\n";
  for (const ConvergenceRow& r : rows) {
    if (max_norm)
      os << r.N << ',' << fmt_err(r.max_u) << ',' << fmt_err(r.max_v) << ',' << fmt_err(r.max_p)
         << ',' << fmt(r.mord_u) << ',' << fmt(r.mord_v) << ',' << fmt(r.mord_p) << '\n';
    else
      os << r.N << ',' << fmt_err(r.err_u) << ',' << fmt_err(r.err_v) << ',' << fmt_err(r.err_p)
         << ',' << fmt(r.ord_u) << ',' << fmt(r.ord_v) << ',' << fmt(r.ord_p) << '\n';
  }
}

std::vector<ConvergenceRow> read_convergence_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(is, line) || line != "N,err_u,err_v,err_p,ord_u,ord_v,ord_p")
    throw std::runtime_error("unexpected convergence CSV header in " + path);
  std::vector<ConvergenceRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    while (cells.size() < 7) cells.emplace_back();
    auto num = [](const std::string& s) { return s.empty() ? static_cast<double>(NAN) : std::stod(s); };
    ConvergenceRow r;
    r.N = std::stoi(cells[0]);
    r.err_u = num(cells[1]);
    r.err_v = num(cells[2]);
    r.err_p = num(cells[3]);
    r.ord_u = num(cells[4]);
    r.ord_v = num(cells[5]);
    r.ord_p = num(cells[6]);
    r.blew_up = std::isnan(r.err_u);
    rows.push_back(r);
  }
  return rows;
}

void write_series_csv(const std::string& path, const std::string& value_name,
                      const std::vector<TimeSample>& series) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "t," << value_name << '\n';
  for (const TimeSample& s : series) os << fmt(s.t) << ',' << fmt_err(s.value) << '\n';
}

std::string git_describe() {
  std::string out;
  if (FILE* p = popen("git describe --always --dirty 2>/dev/null", "r")) {
    char buf[256];
    while (fgets(buf, sizeof buf, p)) out += buf;
    pclose(p);
  }
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
  return out.empty() ? "unknown" : out;
}

void write_manifest(const std::string& dir, const ExperimentConfig& cfg, const std::string& command,
                    double wall_seconds, const std::string& extra) {
  const std::string path = (std::filesystem::path(dir) / "manifest.txt").string();
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "command = " << command << '\n';
  os << "git = " << git_describe() << '\n';
  os << "wall_seconds = " << std::setprecision(6) << wall_seconds << '\n';
  os << "# configuration\n";
  for (const auto& [k, v] : cfg.raw) os << k << " = " << v << '\n';
  os << "# resolved\n";
  os << "resolved.cfl = " << std::setprecision(17) << cfg.cfl_value() << '\n';
  os << "resolved.formulation = " << to_string(cfg.formulation) << '\n';
  os << "resolved.stabilization = " << to_string(cfg.stabilization) << '\n';
  if (cfg.alpha) os << "resolved.alpha = " << *cfg.alpha << '\n';
  else
    os << "resolved.alpha = " << SchemeConfig::default_alpha(cfg.stabilization, cfg.K) << '\n';
  if (!extra.empty()) os << extra;
}

}  // namespace gfsem
