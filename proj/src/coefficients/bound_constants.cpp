#include "gevrey/coefficients/bound_constants.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "gevrey/combinatorics/falling_factorial.hpp"
#include "gevrey/common/errors.hpp"

namespace gevrey::coefficients {

namespace {

double log_big(const combinatorics::BigInt& v) {
  if (v <= 0) throw std::logic_error("log_big: nonpositive argument");
  // cpp_bin_float has a wide exponent range, so huge [1/2]_n parts survive.
  const boost::multiprecision::cpp_bin_float_50 wide(v);
  return boost::multiprecision::log(wide).convert_to<double>();
}

}  // namespace

CoefficientBounds certified_bounds(const CoefficientModel& model, double chi1) {
  if (!(chi1 > 0.0) || !std::isfinite(chi1)) throw ValidationError("certified_bounds: chi1 must be positive");
  const auto& r = model.ranges();
  CoefficientBounds b;
  b.a_bar = 2.0 * chi1 * r.a.hi;
  b.a_low = chi1 * r.a.lo;
  b.b_bar = 2.0 * r.b.hi;
  b.c_bar = 2.0 * r.c.hi;
  b.c_low = r.c.lo;
  return b;
}

BoundConstants bound_constants(const CoefficientBounds& bounds, double mu) {
  if (!(mu > 0.0 && mu < 1.0)) throw ValidationError("bound_constants: mu must lie in (0,1), got " + std::to_string(mu));
  if (!(bounds.a_low > 0.0) || !(bounds.c_low > 0.0) || !(bounds.b_bar >= 0.0) ||
      !(bounds.a_bar >= 2.0 * bounds.a_low) || !(bounds.c_bar >= 2.0 * bounds.c_low))
    throw ValidationError("bound_constants: inconsistent coefficient bounds");

  BoundConstants k;
  k.a_bar = bounds.a_bar;
  k.b_bar = bounds.b_bar;
  k.c_bar = bounds.c_bar;
  k.a_low = bounds.a_low;
  k.c_low = bounds.c_low;
  k.mu = mu;
  k.K_a = (k.a_bar + k.b_bar) / (2.0 * k.a_low);
  k.K_c = k.c_bar / (2.0 * k.c_low);
  k.lambda1_bar = (k.a_bar + k.b_bar) / (2.0 * k.c_low);
  k.u1_bar = std::sqrt(k.lambda1_bar / k.a_low);
  const double kk = k.K_a * k.K_c;
  k.sigma1 = 2.0 * k.K_a * (1.0 + k.K_c);
  k.sigma = k.sigma1 / mu + kk;
  k.rho1 = 3.0 * k.sigma1 + 16.0 * k.sigma * kk;
  k.rho = k.rho1 / mu + (3.0 + 8.0 * k.sigma) * kk;
  return k;
}

BoundConstants bound_constants(const CoefficientModel& model, double mu, double chi1) {
  return bound_constants(certified_bounds(model, chi1), mu);
}

DerivativeBound theoretical_derivative_bound(const BoundConstants& consts,
                                             const combinatorics::Multiindex& nu, double delta,
                                             std::span<const double> radii) {
  const unsigned order = nu.order();
  if (order == 0) throw ValidationError("theoretical_derivative_bound: |nu| must be >= 1");
  if (!(delta >= 1.0)) throw ValidationError("theoretical_derivative_bound: delta must be >= 1");
  if (!(consts.rho > 0.0) || !(consts.sigma > 0.0))
    throw ValidationError("theoretical_derivative_bound: constants not initialized");

  double log_common = std::log(consts.sigma) - std::log(consts.rho);
  for (const auto& [j, exponent] : nu.entries()) {
    if (j > radii.size())
      throw ValidationError("theoretical_derivative_bound: no radius R_" + std::to_string(j));
    const double r = radii[j - 1];
    if (!(r > 0.0)) throw ValidationError("theoretical_derivative_bound: R_" + std::to_string(j) + " must be positive");
    log_common += exponent * (std::log(consts.rho) - std::log(r));
  }
  const auto ff = combinatorics::ff_half(order);
  log_common += log_big(ff.numerator()) - log_big(ff.denominator());
  log_common += (delta - 1.0) * std::lgamma(static_cast<double>(order) + 1.0);

  DerivativeBound out;
  out.lambda_bound = std::exp(std::log(consts.lambda1_bar) + log_common);
  out.u_bound = std::exp(std::log(consts.u1_bar) + log_common);
  return out;
}

}  // namespace gevrey::coefficients
