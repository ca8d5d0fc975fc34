// Command-line harness for decentralized Riemannian subgradient experiments.
//
// Exit codes: 0 success, 1 runtime abort, 2 configuration error.

#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "drsm/harness.hpp"
#include "drsm/plot.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::string preset;
  std::string scale;
  std::string problem;
  std::string topology;
  std::string out;
  std::string dataset;
  std::int64_t seed = -1;
  int epochs = -1;
  std::vector<std::string> overrides;  // key=value
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config, "config file (section.key = value lines)");
  cmd->add_option("--preset", a.preset, "preset: dpcp-poly, dpcp-geo, odl-poly, odl-geo");
  cmd->add_option("--scale", a.scale, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
  cmd->add_option("--problem", a.problem, "dpcp, odl, quadratic, or l1sphere");
  cmd->add_option("--topology", a.topology, "comma list of complete, ring, er");
  cmd->add_option("--seed", a.seed, "RNG seed");
  cmd->add_option("--epochs", a.epochs, "epoch count");
  cmd->add_option("--out", a.out, "output directory");
  cmd->add_option("--dataset", a.dataset, "dataset container to load instead of generating");
  cmd->add_option("--set", a.overrides, "any config key as key=value (repeatable)");
}

drsm::ExperimentConfig resolve_config(const CommonArgs& a) {
  const drsm::ScaleKind scale =
      a.scale == "paper" ? drsm::ScaleKind::paper : drsm::ScaleKind::desk;
  drsm::ExperimentConfig cfg;
  if (!a.config.empty()) {
    cfg = drsm::load_config_file(a.config);
    if (!a.scale.empty()) drsm::apply_key_value(cfg, "scale", a.scale);
  } else if (!a.preset.empty()) {
    cfg = drsm::preset(a.preset, scale);
  } else {
    cfg = drsm::default_config(drsm::ProblemKind::dpcp, scale);
  }
  if (!a.preset.empty() && !a.config.empty()) {
    throw drsm::ConfigError("--preset and --config are mutually exclusive");
  }
  if (!a.problem.empty()) drsm::apply_key_value(cfg, "problem", a.problem);
  if (!a.topology.empty()) drsm::apply_key_value(cfg, "topology", a.topology);
  if (a.seed >= 0) drsm::apply_key_value(cfg, "seed", std::to_string(a.seed));
  if (a.epochs >= 0) drsm::apply_key_value(cfg, "epochs", std::to_string(a.epochs));
  if (!a.out.empty()) drsm::apply_key_value(cfg, "out", a.out);
  if (!a.dataset.empty()) drsm::apply_key_value(cfg, "dataset", a.dataset);
  for (const auto& kv : a.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw drsm::ConfigError("--set expects key=value, got '" + kv + "'");
    }
    drsm::apply_key_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized Riemannian subgradient method over the Stiefel manifold"};
  app.require_subcommand(1);

  CommonArgs run_args, crsm_args, sweep_args, gen_args;
  std::vector<int> sweep_ts = {1, 5, 10};
  std::vector<std::string> plot_csvs;
  std::string plot_column = "recovery_error";
  std::string plot_out = "plot.svg";

  CLI::App* cmd_run = app.add_subcommand("run", "run DRSM on the configured topologies");
  add_common(cmd_run, run_args);
  CLI::App* cmd_crsm = app.add_subcommand("crsm", "run the centralized baseline on pooled data");
  add_common(cmd_crsm, crsm_args);
  CLI::App* cmd_sweep = app.add_subcommand("sweep-t", "run DRSM once per consensus-round count t");
  add_common(cmd_sweep, sweep_args);
  cmd_sweep->add_option("--t-list", sweep_ts, "t values, e.g. --t-list 1 5 10");
  CLI::App* cmd_plot = app.add_subcommand("plot", "render CSV columns as a semilog SVG");
  cmd_plot->add_option("--csv", plot_csvs, "input CSV files")->required()->expected(-1);
  cmd_plot->add_option("--column", plot_column, "column to plot");
  cmd_plot->add_option("--out", plot_out, "output SVG path");
  CLI::App* cmd_gen = app.add_subcommand("gen-data", "write a dataset container");
  add_common(cmd_gen, gen_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_run->parsed()) {
      drsm::run_experiment(resolve_config(run_args));
    } else if (cmd_crsm->parsed()) {
      drsm::run_crsm_baseline(resolve_config(crsm_args));
    } else if (cmd_sweep->parsed()) {
      drsm::sweep_t(resolve_config(sweep_args), sweep_ts);
    } else if (cmd_plot->parsed()) {
      std::vector<std::filesystem::path> paths(plot_csvs.begin(), plot_csvs.end());
      drsm::emit_plot(paths, plot_column, plot_out);
      std::cout << "wrote " << plot_out << "\n";
    } else if (cmd_gen->parsed()) {
      drsm::gen_data(resolve_config(gen_args));
    }
  } catch (const drsm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
