#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "towernorm/experiments.hpp"
#include "towernorm/util.hpp"

namespace {

// Shared flags; every subcommand writes into the same config.  Flag names
// match the config-file keys.
void add_common_options(CLI::App* cmd, towernorm::ExperimentConfig& cfg) {
  cmd->add_option("--backend", cfg.backend, "Quotient family: ag, sl2, or file");
  cmd->add_option("--levels", cfg.levels, "Tower depth");
  cmd->add_option("--unwind", cfg.unwind,
                  "Cotree edges to unwind per cover step (0 = all)")
      ->delimiter(',');
  cmd->add_option("--modulus", cfg.modulus, "Base modulus for the sl2 backend");
  cmd->add_option("--path", cfg.path, "Permutation file for the file backend");
  cmd->add_option("--element", cfg.element,
                  "Group algebra element, e.g. 0.25*a+0.25*A+0.25*b+0.25*B");
  cmd->add_option("--level", cfg.level, "Tower level (default: top)");
  cmd->add_option("--radius", cfg.radius, "Ball or lifting radius");
  cmd->add_option("--gamma", cfg.gamma, "Growth: iota, nu, or a file path");
  cmd->add_option("--gamma2", cfg.gamma2, "Second growth for comparisons");
  cmd->add_option("--k", cfg.k, "Free-bit counts (folner) or budget multiplier");
  cmd->add_option("--budget", cfg.budget, "Support size budget");
  cmd->add_option("--strategy", cfg.strategy,
                  "auto, exhaustive, truncated, greedy, or folner");
  cmd->add_option("--seed", cfg.seed, "Random restart seed");
  cmd->add_option("--tol", cfg.tol, "Certified residual tolerance");
  cmd->add_flag("--deficiency", cfg.deficiency,
                "Append the support deficiency column");
  cmd->add_option("--out", cfg.out, "Output file (default: stdout)");
  cmd->add_option("--format", cfg.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite quotient towers of the free group: norms, gaps, and "
               "almost-invariant sets"};
  app.require_subcommand(1);

  towernorm::ExperimentConfig cfg;
  std::string config_path;

  auto bind = [&cfg](CLI::App* cmd, const char* experiment) {
    cmd->callback([&cfg, experiment]() { cfg.experiment = experiment; });
    add_common_options(cmd, cfg);
  };

  CLI::App* tower = app.add_subcommand("tower", "Quotient towers");
  bind(tower->add_subcommand("build", "Build and validate a tower"), "tower");

  CLI::App* geometry = app.add_subcommand("geometry", "Metric structure");
  bind(geometry->add_subcommand("alpha", "Injectivity radius per level"), "alpha");
  bind(geometry->add_subcommand("lift-check",
                                "Ball lifting isometry check per level"),
       "lift");

  CLI::App* spectra = app.add_subcommand("spectra", "Operator norms and gaps");
  bind(spectra->add_subcommand("norm", "Operator norm per level"), "norm");
  bind(spectra->add_subcommand("gap", "Spectral gap per level"), "gap");
  bind(spectra->add_subcommand("rho", "New-part norm per level"), "rho");
  bind(spectra->add_subcommand("regular", "Free-group ball norms up to --radius"),
       "regular");

  CLI::App* sparse = app.add_subcommand("sparse", "Support-constrained quantities");
  bind(sparse->add_subcommand("norm", "Best sparse norm at a budget"), "sparse-norm");
  bind(sparse->add_subcommand("deficiency", "Minimal invariance deficiency"),
       "deficiency");

  CLI::App* folner = app.add_subcommand("folner", "Almost-invariant set family");
  bind(folner->add_subcommand("run", "Build the sets and report boundaries"),
       "folner");

  CLI::App* growth = app.add_subcommand("growth", "Growth comparisons");
  bind(growth->add_subcommand("compare", "Compare two growth functions"), "growth");

  CLI::App* report = app.add_subcommand("report", "Aggregated tables");
  bind(report->add_subcommand("interpolate",
                              "Sparse norms between point masses and full level"),
       "interpolate");

  CLI::App* runner = app.add_subcommand("run", "Run an experiment from a config file");
  runner->add_option("--config", config_path, "key = value config file")->required();
  add_common_options(runner, cfg);
  runner->callback([&]() {
    towernorm::ExperimentConfig merged = towernorm::parse_config_file(config_path);
    // Flags given on the command line override the file.
    for (const CLI::Option* opt : runner->get_options()) {
      if (opt->count() == 0) continue;
      std::string name = opt->get_name();
      if (name.rfind("--", 0) != 0 || name == "--config") continue;
      std::string key = name.substr(2);
      if (key == "deficiency") {
        merged.deficiency = true;
        continue;
      }
      std::string value;
      for (const std::string& r : opt->results()) {
        if (!value.empty()) value += ',';
        value += r;
      }
      towernorm::apply_config_entry(merged, key, value);
    }
    cfg = merged;
  });

  try {
    app.parse(argc, argv);
    if (cfg.experiment.empty()) {
      std::cerr << "error: no experiment selected\n";
      return 2;
    }
    return towernorm::run_and_emit(cfg);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);  // nonzero on bad usage
  } catch (const towernorm::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const towernorm::CapExceeded& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
