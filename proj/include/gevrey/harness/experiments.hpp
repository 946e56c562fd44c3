#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gevrey/coefficients/coefficient_model.hpp"
#include "gevrey/eigensolver/eigensolver.hpp"
#include "gevrey/harness/config.hpp"
#include "gevrey/harness/report.hpp"

namespace gevrey::harness {

struct ExperimentResult {
  std::optional<Table> table;        // the CSV, when the experiment has one
  std::vector<std::string> summary;  // printed to stdout
  bool passed = true;                // false makes the CLI exit nonzero
  std::vector<PlotSeries> plot;
  Transform transform = Transform::kLogLog;
  std::string title;
  std::string x_label;
};

coefficients::CoefficientModel make_model(const RunConfig& cfg);
eigensolver::SolverOptions solver_options(const RunConfig& cfg);

ExperimentResult run_gl_study(const RunConfig& cfg);
ExperimentResult run_qmc_study(const RunConfig& cfg);  // also mc-study
ExperimentResult run_trunc_study(const RunConfig& cfg);
ExperimentResult run_checks(const RunConfig& cfg);
ExperimentResult run_solve_evp(const RunConfig& cfg);
ExperimentResult run_cbc(const RunConfig& cfg);

/// Validates cfg and dispatches on cfg.experiment.
ExperimentResult run_experiment(const RunConfig& cfg);

/// CSV to cfg.out and SVG to cfg.svg when those are set. Returns false if no
/// CSV was written because cfg.out is empty.
bool write_outputs(const RunConfig& cfg, const ExperimentResult& result);

}  // namespace gevrey::harness
