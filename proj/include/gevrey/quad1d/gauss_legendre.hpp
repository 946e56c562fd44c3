#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "gevrey/coefficients/coefficient_model.hpp"
#include "gevrey/eigensolver/eigensolver.hpp"

namespace gevrey::quad1d {

struct GaussRule {
  std::size_t n = 0;
  std::vector<double> nodes;    // increasing, in (-1, 1)
  std::vector<double> weights;  // positive

  double apply(const std::function<double(double)>& f) const;
};

/// n-point Gauss-Legendre rule on [-1, 1], 1 <= n <= 512. Roots by Newton
/// iteration from cos(pi (i - 1/4) / (n + 1/2)); mirrored so the rule is
/// exactly symmetric.
GaussRule gauss_legendre(std::size_t n);

/// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(std::size_t n, double x);

struct GlErrorRecord {
  std::size_t n = 0;
  double error = 0.0;  // |Q_{n*} - Q_n| / |Q_{n*}|
};

struct GlStudyResult {
  double reference = 0.0;  // Q_{n*}[lambda_1]
  std::vector<GlErrorRecord> records;
  std::size_t distinct_solves = 0;
};

/// Relative Gauss-Legendre errors of the integral of lambda_1 over y in [-1, 1],
/// measured against the n_star-point rule. Each distinct node is solved once.
GlStudyResult gl_study(const coefficients::CoefficientModel& model, std::size_t m,
                       const std::vector<std::size_t>& n_list, std::size_t n_star,
                       const eigensolver::SolverOptions& opts = {});

}  // namespace gevrey::quad1d
