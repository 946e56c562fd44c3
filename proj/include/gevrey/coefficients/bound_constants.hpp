#pragma once

#include <numbers>
#include <span>

#include "gevrey/coefficients/coefficient_model.hpp"
#include "gevrey/combinatorics/multiindex.hpp"

namespace gevrey::coefficients {

/// Smallest Dirichlet-Laplace eigenvalue of the unit square.
inline constexpr double kChi1UnitSquare = 2.0 * std::numbers::pi * std::numbers::pi;

/// a_bar/2 >= a >= a_low > 0, b_bar/2 >= b >= 0, c_bar/2 >= c >= c_low > 0.
struct CoefficientBounds {
  double a_bar = 0.0;
  double b_bar = 0.0;
  double c_bar = 0.0;
  double a_low = 0.0;
  double c_low = 0.0;
};

struct BoundConstants {
  double a_bar = 0.0;
  double b_bar = 0.0;
  double c_bar = 0.0;
  double a_low = 0.0;
  double c_low = 0.0;
  double K_a = 0.0;
  double K_c = 0.0;
  double lambda1_bar = 0.0;
  double u1_bar = 0.0;
  double mu = 0.0;
  double sigma1 = 0.0;
  double sigma = 0.0;
  double rho1 = 0.0;
  double rho = 0.0;
};

/// Bounds of the diffusion coefficient a = chi1 * a_tilde, where a_tilde is
/// the field the model evaluates; b and c are taken as is. The bars are
/// twice the certified suprema.
CoefficientBounds certified_bounds(const CoefficientModel& model, double chi1 = kChi1UnitSquare);

/// Contrasts, eigenvalue bounds and scaling factors. Throws ValidationError
/// unless 0 < mu < 1 and the bounds are positive (b_bar >= 0).
BoundConstants bound_constants(const CoefficientBounds& bounds, double mu);

BoundConstants bound_constants(const CoefficientModel& model, double mu, double chi1 = kChi1UnitSquare);

struct DerivativeBound {
  double lambda_bound = 0.0;
  double u_bound = 0.0;
};

/// lambda1_bar sigma / rho * (rho/R)^nu [1/2]_{|nu|} (|nu|!)^{delta-1}, and the
/// same with u1_bar. radii[j-1] is R_j; every j in the support of nu needs one.
/// Evaluated in log space; overflow yields +inf.
DerivativeBound theoretical_derivative_bound(const BoundConstants& consts,
                                             const combinatorics::Multiindex& nu, double delta,
                                             std::span<const double> radii);

}  // namespace gevrey::coefficients
