#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "gevrey/coefficients/coefficient_model.hpp"
#include "gevrey/common/errors.hpp"
#include "gevrey/fem/mesh.hpp"

namespace gevrey::eigensolver {

struct EigenPair {
  double lambda = 0.0;
  std::vector<double> u;   // u^T M u = 1
  double residual = 0.0;   // ||A u - lambda M u|| / ||u||
  std::size_t iterations = 0;
};

enum class InnerSolver { kBandedCholesky, kPcgJacobi };

struct SolverOptions {
  double tol = 1e-14;  // absolute, on successive eigenvalue iterates
  std::size_t max_iter = 10000;
  InnerSolver inner = InnerSolver::kBandedCholesky;
};

/// Inverse iteration gave up; carries the last iterate.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, EigenPair last) : NumericalError(what), last_(std::move(last)) {}
  const EigenPair& last() const noexcept { return last_; }

 private:
  EigenPair last_;
};

/// Smallest eigenpair of A u = lambda M u by inverse iteration from the
/// M-normalized all-ones vector. Converged once successive Rayleigh
/// quotients differ by at most tol and the residual is at most 10 tol lambda.
EigenPair smallest_eigenpair(const fem::SparseSystem& sys, const SolverOptions& opts = {});

/// Second eigenpair by inverse iteration M-orthogonalized against first.u.
/// Throws NumericalError if the deflated iterate collapses.
EigenPair second_eigenpair(const fem::SparseSystem& sys, const EigenPair& first, const SolverOptions& opts = {});

struct GapReport {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double gap = 0.0;  // 1 - lambda1 / lambda2 at the argmin
  std::vector<double> y_argmin;
  std::size_t argmin_index = 0;
  std::vector<double> lambda1_samples;
  std::vector<double> lambda2_samples;
};

/// Minimum sampled relative gap 1 - lambda1/lambda2, an upper estimate of mu.
/// Samples run on the worker pool; failures name the sample index.
GapReport estimate_gap(const coefficients::CoefficientModel& model, std::size_t m,
                       const std::vector<std::vector<double>>& y_samples, const SolverOptions& opts = {});

/// lambda1 of the model at y on an m-mesh.
double smallest_eigenvalue(const coefficients::CoefficientModel& model, std::size_t m, std::span<const double> y,
                           const SolverOptions& opts = {});

/// 8-byte magic "GEVREYEV", uint64 n, then n little-endian doubles.
void write_eigenvector(const std::filesystem::path& path, std::span<const double> u);
std::vector<double> read_eigenvector(const std::filesystem::path& path);

}  // namespace gevrey::eigensolver
