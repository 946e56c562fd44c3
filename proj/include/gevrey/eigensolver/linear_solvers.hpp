#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gevrey/fem/sparse.hpp"

namespace gevrey::eigensolver {

/// Cholesky factor L L^T of a symmetric positive definite band matrix.
/// Throws NumericalError if a pivot is not positive.
class BandedCholesky {
 public:
  explicit BandedCholesky(const fem::CsrMatrix& a);

  void solve(std::span<const double> b, std::span<double> x) const;
  std::size_t bandwidth() const noexcept { return bw_; }

 private:
  double& l(std::size_t i, std::size_t j) { return band_[i * (bw_ + 1) + (j + bw_ - i)]; }
  double l(std::size_t i, std::size_t j) const { return band_[i * (bw_ + 1) + (j + bw_ - i)]; }

  std::size_t n_ = 0;
  std::size_t bw_ = 0;
  std::vector<double> band_;
};

struct PcgResult {
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Jacobi-preconditioned conjugate gradients. x holds the initial guess on
/// entry. Stops at ||b - A x|| <= rel_tol ||b||.
PcgResult pcg_solve(const fem::CsrMatrix& a, std::span<const double> b, std::span<double> x, double rel_tol,
                    std::size_t max_iter);

}  // namespace gevrey::eigensolver
