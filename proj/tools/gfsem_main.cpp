#include "gfsem/experiment.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace gfsem;
namespace fs = std::filesystem;

namespace {

constexpr int kExitBlowUp = 2;
constexpr int kExitConfig = 3;

struct Options {
  std::string config;
  std::string out;
  int threads = 1;
};

std::string path_in(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string time_tag(double t) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << t;
  return os.str();
}

/** Loads the config, applies --out, and checks the output directory before any work. */
ExperimentConfig prepare(const Options& o) {
  ExperimentConfig cfg = ExperimentConfig::load(o.config);
  if (!o.out.empty()) cfg.output_dir = o.out;
  ensure_writable_dir(cfg.output_dir);
  return cfg;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_solve(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = prepare(o);
  const SolveResult r = run_solve(cfg);
  write_state(path_in(cfg.output_dir, "final"), r.final_state);
  if (cfg.track_divergence)
    write_series_csv(path_in(cfg.output_dir, "divergence.csv"), "div_norm", r.divergence);
  write_manifest(cfg.output_dir, cfg, "solve " + o.config, seconds_since(t0),
                 "steps = " + std::to_string(r.steps) + '\n');
  std::cout << "solve: " << r.steps << " steps, output in " << cfg.output_dir << '\n';
  return 0;
}

int cmd_convergence(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = prepare(o);
  const auto rows = run_convergence(cfg, o.threads);
  write_convergence_csv(path_in(cfg.output_dir, "convergence.csv"), rows);
  write_convergence_csv(path_in(cfg.output_dir, "convergence_max.csv"), rows, true);
  bool blew_up = false;
  std::string flagged;
  for (const ConvergenceRow& r : rows)
    if (r.blew_up) {
      blew_up = true;
      flagged += "blew_up.N" + std::to_string(r.N) + " = true\n";
    }
  write_manifest(cfg.output_dir, cfg, "convergence " + o.config, seconds_since(t0), flagged);
  std::cout << std::setw(6) << "N" << std::setw(13) << "err_u" << std::setw(13) << "err_v"
            << std::setw(13) << "err_p" << std::setw(8) << "ord_u" << std::setw(8) << "ord_v"
            << std::setw(8) << "ord_p" << '\n';
  for (const ConvergenceRow& r : rows)
    std::cout << std::setw(6) << r.N << std::scientific << std::setprecision(3) << std::setw(13)
              << r.err_u << std::setw(13) << r.err_v << std::setw(13) << r.err_p << std::fixed
              << std::setprecision(2) << std::setw(8) << r.ord_u << std::setw(8) << r.ord_v
              << std::setw(8) << r.ord_p << (r.blew_up ? "  blow-up" : "") << '\n';
  return blew_up ? kExitBlowUp : 0;
}

int cmd_perturb(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = prepare(o);
  const PerturbationResult r = run_perturbation(cfg);
  write_series_csv(path_in(cfg.output_dir, "max_difference.csv"), "max_velocity_difference",
                   r.max_difference);
  write_state(path_in(cfg.output_dir, "equilibrium"), r.equilibrium);
  write_state(path_in(cfg.output_dir, "final"), r.final_state);
  for (const auto& [t, field] : r.snapshots)
    write_field(path_in(cfg.output_dir, "difference_t" + time_tag(t) + ".txt"), field);
  write_manifest(cfg.output_dir, cfg, "perturb " + o.config, seconds_since(t0),
                 "snapshots = " + std::to_string(r.snapshots.size()) + '\n');
  std::cout << "perturb: " << r.snapshots.size() << " snapshots, final max difference "
            << r.max_difference.back().value << '\n';
  return 0;
}

int cmd_project(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = prepare(o);
  const ProblemSpec problem = make_problem(cfg.problem, cfg.problem_params);
  const GridPtr grid = grid_for(cfg, problem, 0);
  ProjectionReport rep;
  const State q = initial_state(cfg, problem, grid, &rep);
  if (rep.method.empty()) {
    rep.method = cfg.init_method;
    rep.kernel_residual = kernel_residual(q, problem, cfg.scheme_for(*grid));
  }
  write_state(path_in(cfg.output_dir, "projected"), q);
  std::ostringstream extra;
  extra << std::setprecision(17) << "projection.method = " << rep.method << '\n'
        << "projection.kernel_residual = " << rep.kernel_residual << '\n'
        << "projection.constraint_residual = " << rep.constraint_residual << '\n'
        << "projection.deviation = " << rep.deviation << '\n'
        << "projection.rank = " << rep.rank << '\n';
  write_manifest(cfg.output_dir, cfg, "project " + o.config, seconds_since(t0), extra.str());
  std::cout << "project: " << rep.method << ", kernel residual " << rep.kernel_residual << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationarity-preserving spectral-element solver for linear acoustics"};
  app.require_subcommand(1);
  Options opts;
  app.add_option("--out", opts.out, "Output directory (overrides output.dir)");
  app.add_option("--threads", opts.threads, "Worker threads for convergence studies")
      ->check(CLI::PositiveNumber);

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const Options&);
  };
  const Command commands[] = {
      {"solve", "Single run to the final time", cmd_solve},
      {"convergence", "Mesh-refinement study against the exact solution", cmd_convergence},
      {"perturb", "Perturb a discrete equilibrium and track the difference", cmd_perturb},
      {"project", "Build the initial state only and dump it", cmd_project},
  };
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("config", opts.config, "Configuration file")->required();
    sub->add_option("--out", opts.out, "Output directory (overrides output.dir)");
    sub->add_option("--threads", opts.threads, "Worker threads for convergence studies")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    for (const Command& c : commands)
      if (app.got_subcommand(c.name)) return c.run(opts);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const BlowUpError& e) {
    std::cerr << "blow-up: " << e.what() << '\n';
    return kExitBlowUp;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
