// gevrey-evp: command-line front end for the experiments.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "gevrey/common/errors.hpp"
#include "gevrey/harness/config.hpp"
#include "gevrey/harness/experiments.hpp"

using namespace gevrey;
using namespace gevrey::harness;

namespace {

struct Command {
  Experiment experiment;
  CLI::App* app = nullptr;
  std::string config_path;
  std::map<std::string, std::string> overrides;
  bool second = false;
  std::string check_kind;
};

std::string flag_for(const std::string& key) {
  std::string f = key;
  for (char& c : f)
    if (c == '_') c = '-';
  return "--" + f;
}

const std::map<std::string, std::string> kHelp{
    {"model", "coefficient model: gl-analytic, gl-gevrey3, qmc-analytic, qmc-gevrey2, constant, custom"},
    {"custom_file", "sine-series table for --model custom"},
    {"m", "mesh cells per side"},
    {"solver", "inner solver: cholesky or pcg"},
    {"tol", "eigenvalue tolerance"},
    {"n_max", "largest n (Gauss points, or factorial order for checks)"},
    {"n_star", "reference Gauss rule size"},
    {"levels", "QMC levels as exponents m1..m2 (n = 2^m)"},
    {"shifts", "random shifts R"},
    {"seed", "master seed"},
    {"beta", "beta rule, e.g. j^-5"},
    {"out", "output file (CSV, or generating vector for cbc)"},
    {"svg", "plot file"},
    {"y", "comma-separated parameter values"},
};

void add_key_options(Command& cmd) {
  for (const auto& key : keys_for(cmd.experiment)) {
    if (key == "second" || key == "check") continue;
    const auto it = kHelp.find(key);
    cmd.app->add_option(flag_for(key), cmd.overrides[key], it == kHelp.end() ? key : it->second);
  }
}

int run_command(Command& cmd) {
  RunConfig cfg = cmd.config_path.empty() ? default_config(cmd.experiment) : load_config(cmd.config_path, cmd.experiment);
  if (!cmd.check_kind.empty()) apply_override(cfg, "check", cmd.check_kind);
  for (const auto& key : keys_for(cmd.experiment)) {
    const auto it = cmd.overrides.find(key);
    if (it == cmd.overrides.end()) continue;
    const std::string flag = flag_for(key);
    if (cmd.app->count(flag) > 0) apply_override(cfg, key, it->second);
  }
  if (cmd.second) cfg.second = true;

  const ExperimentResult res = run_experiment(cfg);
  const bool wrote = write_outputs(cfg, res);
  if (!wrote && res.table) std::cout << to_csv(*res.table);
  for (const auto& line : res.summary) std::cout << line << '\n';
  std::cout.flush();
  return res.passed ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parametric elliptic eigenvalue problems: solves, quadrature studies and checks"};
  app.require_subcommand(1);

  std::vector<std::unique_ptr<Command>> commands;
  const auto add = [&](Experiment e, const std::string& description) -> Command& {
    auto cmd = std::make_unique<Command>();
    cmd->experiment = e;
    cmd->app = app.add_subcommand(std::string(experiment_name(e)), description);
    cmd->app->add_option("--config", cmd->config_path, "config file; the section named after the subcommand is used");
    commands.push_back(std::move(cmd));
    return *commands.back();
  };

  add(Experiment::kGlStudy, "Gauss-Legendre convergence of the mean of lambda_1 over y in [-1, 1]");
  add(Experiment::kQmcStudy, "randomly shifted lattice rule vs Monte Carlo, relative RMSE per level");
  add(Experiment::kMcStudy, "Monte Carlo relative RMSE per level");
  add(Experiment::kTruncStudy, "dimension truncation error of the mean of lambda_1");
  auto& checks = add(Experiment::kChecks, "exact combinatorial identities or Gevrey-order classification");
  checks.app->add_option("kind", checks.check_kind, "combinatorics or gevrey")->check(CLI::IsMember({"combinatorics", "gevrey"}));
  auto& solve = add(Experiment::kSolveEvp, "smallest eigenpair of one parameter instance");
  solve.app->add_flag("--second", solve.second, "also compute lambda_2");
  add(Experiment::kCbc, "component-by-component generating vector");
  for (auto& c : commands) add_key_options(*c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    for (auto& c : commands) {
      if (!c->app->parsed()) continue;
      return run_command(*c);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
