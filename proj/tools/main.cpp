// gatelab: run the gate-entanglement experiments from the command line.
//
// Exit status: 0 all checks passed, 1 a check failed, 2 bad configuration or
// input. Progress and summaries go to stderr; data goes to files only.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "experiments.hpp"
#include "gatelab/errors.hpp"
#include "gatelab/iteration.hpp"

namespace {

using gatelab::app::ConfigError;
using gatelab::app::ExperimentConfig;

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

struct Flags {
  std::optional<std::string> experiment;
  std::optional<std::string> config_file;
  std::optional<std::size_t> n_local, n_max, samples, workers;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> sigma;
  std::optional<std::string> ensemble, gate, gate_file, export_gate;
};

ExperimentConfig build_config(const Flags& f) {
  std::optional<std::string> text;
  if (f.config_file) text = read_file(*f.config_file);

  // The experiment picks the defaults, so resolve it first: flag, then file.
  gatelab::app::Experiment exp = gatelab::app::Experiment::verify;
  if (f.experiment) {
    exp = gatelab::app::parse_experiment(*f.experiment);
  } else if (text) {
    exp = gatelab::app::apply_config_json(gatelab::app::default_config(exp), *text).experiment;
  } else {
    throw ConfigError("no experiment given (use --experiment or a config file)");
  }
  ExperimentConfig c = gatelab::app::default_config(exp);
  if (text) c = gatelab::app::apply_config_json(c, *text);
  c.experiment = exp;

  if (f.n_local) c.n_local = *f.n_local;
  if (f.n_max) c.n_max = *f.n_max;
  if (f.samples) c.samples = *f.samples;
  if (f.seed) c.seed = *f.seed;
  if (f.out) c.output_path = *f.out;
  if (f.sigma) c.tolerance_sigma = *f.sigma;
  if (f.workers) c.workers = *f.workers;
  if (f.ensemble) {
    try {
      c.ensemble = gatelab::ensemble_from_json(read_file(*f.ensemble));
    } catch (const gatelab::ValidationError& e) {
      throw ConfigError(std::string("ensemble file: ") + e.what());
    }
  }
  if (f.gate) c.gate_name = *f.gate;
  if (f.gate_file) c.gate_file = *f.gate_file;
  if (f.export_gate) c.export_gate = *f.export_gate;
  c.ensemble.n_local = c.ensemble.kind == gatelab::EnsembleKind::fixed ? c.ensemble.n_local
                                                                        : c.n_local;
  if (c.experiment == gatelab::app::Experiment::metrics && !c.gate_name && !c.gate_file &&
      !f.ensemble && !(text && text->find("\"ensemble\"") != std::string::npos)) {
    c.gate_name = "cnot";
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entangling power and gate-typicality experiments"};
  Flags f;
  app.add_option("--experiment", f.experiment, "fig1, fig2, corollary, verify or metrics");
  app.add_option("--config", f.config_file, "JSON config file; flags override its keys");
  app.add_option("--n-local", f.n_local, "local dimension N");
  app.add_option("--n-max", f.n_max, "largest iteration count");
  app.add_option("--samples", f.samples, "Monte Carlo sample count");
  app.add_option("--seed", f.seed, "master seed");
  app.add_option("--out", f.out, "output directory");
  app.add_option("--sigma", f.sigma, "tolerance in standard errors for statistical checks");
  app.add_option("--workers", f.workers, "worker threads (results do not depend on it)");
  app.add_option("--ensemble", f.ensemble, "ensemble spec JSON file");
  app.add_option("--gate", f.gate, "built-in gate for metrics: cnot, swap or identity");
  app.add_option("--gate-file", f.gate_file, "gate matrix JSON file for metrics");
  app.add_option("--export-gate", f.export_gate, "write the metrics gate as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  gatelab::app::ExperimentResult result;
  try {
    const ExperimentConfig config = build_config(f);
    std::cerr << "running " << gatelab::app::to_string(config.experiment) << " (seed "
              << config.seed << ", workers " << config.workers << ")\n";
    result = gatelab::app::run(config);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const gatelab::ValidationError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const gatelab::ShapeError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const gatelab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  for (const auto& [key, value] : result.summary) {
    std::cerr << "  " << key << " = " << gatelab::format_double(value) << '\n';
  }
  for (const auto& c : result.checks) {
    std::cerr << (c.passed ? "  PASS " : "  FAIL ") << c.name;
    if (!c.detail.empty()) std::cerr << " (" << c.detail << ')';
    std::cerr << '\n';
  }
  for (const auto& file : result.files) std::cerr << "  wrote " << file.string() << '\n';
  std::cerr << "  wall time " << result.wall_seconds << " s\n";
  return result.all_passed() ? 0 : 1;
}
