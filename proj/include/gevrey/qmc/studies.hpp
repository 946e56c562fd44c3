#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gevrey/coefficients/coefficient_model.hpp"
#include "gevrey/eigensolver/eigensolver.hpp"
#include "gevrey/qmc/lattice.hpp"

namespace gevrey::qmc {

struct ErrorRecord {
  std::uint64_t n = 0;
  double rmse = 0.0;           // relative to the reference
  std::vector<double> values;  // per-shift or per-replicate estimates
};

struct RmseStudyConfig {
  std::size_t m = 32;
  std::size_t s = 20;
  std::vector<std::uint64_t> n_list;  // ascending powers of two
  std::size_t shifts = 8;             // R for the lattice rule
  std::size_t mc_replicates = 8;
  std::uint64_t seed = 0;
  bool run_qmc = true;  // lower QMC levels; the top level is always run for the reference
  bool run_mc = true;
  PODWeights weights;   // for CBC; beta needs s entries
  std::optional<GeneratingVector> fixed_vector;  // used as z mod n instead of CBC when set
  eigensolver::SolverOptions solver;
};

struct RmseStudyResult {
  double reference = 0.0;  // mean of the top-level QMC estimates
  std::vector<ErrorRecord> qmc;
  std::vector<ErrorRecord> mc;
  std::vector<std::vector<std::uint64_t>> vectors;  // one per level
  std::string vector_source;                        // "cbc" or "file"
};

/// Relative RMSE over shifts (QMC) and replicates (MC) of the mean of
/// lambda_1 over [-1/2, 1/2]^s against the top-level QMC mean. Shift r uses
/// stream (seed, r); MC sample i uses stream (seed, shifts + i).
RmseStudyResult rmse_study(const coefficients::CoefficientModel& model, const RmseStudyConfig& cfg);

struct TruncationConfig {
  std::size_t m = 32;
  std::vector<std::size_t> s_list;  // ascending
  std::size_t s_ref = 0;            // > max(s_list)
  std::uint64_t n = 1024;
  std::size_t shifts = 4;
  std::uint64_t seed = 0;
  PODWeights weights;  // beta needs s_ref entries
  eigensolver::SolverOptions solver;
};

struct TruncationRecord {
  std::size_t s = 0;
  double estimate = 0.0;
  double error = 0.0;  // |I_ref - I_s|
};

struct TruncationResult {
  double reference = 0.0;
  std::vector<TruncationRecord> records;
};

/// I_s from one CBC lattice rule in dimension s_ref, with coordinates beyond s
/// set to zero, so every s reuses the same points.
TruncationResult truncation_study(const coefficients::CoefficientModel& model, const TruncationConfig& cfg);

/// Default CBC weights for a model: beta_j = j^-5, delta from the model's
/// regularity class, theta = 0.55.
PODWeights default_weights(const coefficients::CoefficientModel& model, std::size_t s);

}  // namespace gevrey::qmc
