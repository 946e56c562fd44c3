#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "gevrey/coefficients/coefficient_model.hpp"
#include "gevrey/eigensolver/eigensolver.hpp"
#include "gevrey/quad1d/gauss_legendre.hpp"

namespace gevrey::derivcheck {

using ScalarMap = std::function<double(double)>;

/// Coefficients below this are treated as noise.
inline constexpr double kNoiseFloor = 1e-13;

/// c_k = (2k+1)/2 * Q_n[f P_k], k = 0..K. Requires quad_n >= 2K.
/// f is sampled in parallel at the quad_n Gauss nodes.
std::vector<double> legendre_coeffs(const ScalarMap& f, std::size_t K, std::size_t quad_n);

/// Same, from values already sampled at rule.nodes.
std::vector<double> legendre_coeffs(const quad1d::GaussRule& rule, const std::vector<double>& values, std::size_t K);

struct CandidateFit {
  double delta = 1.0;
  double C = 0.0;  // |c_k| ~ C exp(-r k^(1/delta))
  double r = 0.0;
  double goodness = 0.0;  // r^2 of the fit of log|c_k| against k^(1/delta)
};

struct DecayFit {
  std::vector<double> coeffs;
  std::vector<std::size_t> used;  // indices k above the noise floor
  CandidateFit best;
  std::vector<CandidateFit> candidates;  // in the order given
};

inline const std::vector<double> kDefaultDeltas{1.0, 1.5, 2.0, 3.0, 4.0};

/// Least-squares fit for each delta; the largest goodness wins, ties to the
/// smaller delta. Needs at least 8 coefficients above the noise floor.
DecayFit classify_decay(const std::vector<double>& coeffs, const std::vector<double>& deltas = kDefaultDeltas);

struct FdResult {
  double value = 0.0;       // central difference with step h
  double half_step = 0.0;   // same with h/2
  double richardson = 0.0;  // (4 D(h/2) - D(h)) / 3
  double consistency = 0.0; // |D(h) - D(h/2)|
};

/// Central difference of order 0..6 at y0; nodes y0 + (i - order/2) h.
/// The stencil must stay inside [lo, hi].
FdResult fd_derivative(const ScalarMap& f, double y0, unsigned order, double h, double lo = -1.0, double hi = 1.0);

struct BoundCheck {
  unsigned order = 0;
  double observed = 0.0;   // |d^order lambda_1 / dy_1^order| by finite differences
  double bound = 0.0;      // theoretical bound with the measured mu
  double mu = 0.0;
  bool holds = false;
};

/// Compares finite-difference derivatives of lambda_1 along y_1 at y0 with the
/// theoretical bound. mu is the minimum sampled relative gap over mu_samples
/// equispaced points in the first parameter. Needs a model with Gevrey data.
std::vector<BoundCheck> check_derivative_bounds(const coefficients::CoefficientModel& model, std::size_t m, double y0,
                                                unsigned max_order, double h, std::size_t mu_samples,
                                                const eigensolver::SolverOptions& opts = {});

/// lambda_1 along y_1 with the other parameters zero.
ScalarMap lambda1_along_first(const coefficients::CoefficientModel& model, std::size_t m,
                              const eigensolver::SolverOptions& opts = {});

}  // namespace gevrey::derivcheck
