#include "gevrey/eigensolver/linear_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gevrey/common/errors.hpp"

namespace gevrey::eigensolver {

BandedCholesky::BandedCholesky(const fem::CsrMatrix& a) : n_(a.n), bw_(a.bandwidth()) {
  band_.assign(n_ * (bw_ + 1), 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      if (a.col[k] <= i) l(i, a.col[k]) = a.val[k];

  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t lo = i > bw_ ? i - bw_ : 0;
    for (std::size_t j = lo; j <= i; ++j) {
      double s = l(i, j);
      const std::size_t klo = std::max(lo, j > bw_ ? j - bw_ : 0);
      for (std::size_t k = klo; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (!(s > 0.0))
          throw NumericalError("banded Cholesky: matrix not positive definite (pivot " + std::to_string(i) + ")");
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
}

void BandedCholesky::solve(std::span<const double> b, std::span<double> x) const {
  if (b.size() != n_ || x.size() != n_) throw ValidationError("BandedCholesky::solve: size mismatch");
  for (std::size_t i = 0; i < n_; ++i) {
    double s = b[i];
    const std::size_t lo = i > bw_ ? i - bw_ : 0;
    for (std::size_t k = lo; k < i; ++k) s -= l(i, k) * x[k];
    x[i] = s / l(i, i);
  }
  for (std::size_t ii = n_; ii-- > 0;) {
    double s = x[ii];
    const std::size_t hi = std::min(n_ - 1, ii + bw_);
    for (std::size_t k = ii + 1; k <= hi; ++k) s -= l(k, ii) * x[k];
    x[ii] = s / l(ii, ii);
  }
}

PcgResult pcg_solve(const fem::CsrMatrix& a, std::span<const double> b, std::span<double> x, double rel_tol,
                    std::size_t max_iter) {
  const std::size_t n = a.n;
  if (b.size() != n || x.size() != n) throw ValidationError("pcg_solve: size mismatch");
  const auto diag = a.diagonal();
  for (double d : diag)
    if (!(d > 0.0)) throw NumericalError("pcg_solve: nonpositive diagonal, matrix not SPD");

  std::vector<double> r(n), z(n), p(n), ap(n);
  a.multiply(x, r);
  double bnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = b[i] - r[i];
    bnorm += b[i] * b[i];
  }
  bnorm = std::sqrt(bnorm);
  PcgResult res;
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    res.converged = true;
    return res;
  }
  double rz = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = r[i] / diag[i];
    p[i] = z[i];
    rz += r[i] * z[i];
  }
  for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
    double rnorm = 0.0;
    for (double v : r) rnorm += v * v;
    res.relative_residual = std::sqrt(rnorm) / bnorm;
    if (res.relative_residual <= rel_tol) {
      res.converged = true;
      return res;
    }
    a.multiply(p, ap);
    double pap = 0.0;
    for (std::size_t i = 0; i < n; ++i) pap += p[i] * ap[i];
    if (!(pap > 0.0)) throw NumericalError("pcg_solve: matrix not positive definite");
    const double alpha = rz / pap;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    double rz_new = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = r[i] / diag[i];
      rz_new += r[i] * z[i];
    }
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return res;
}

}  // namespace gevrey::eigensolver
