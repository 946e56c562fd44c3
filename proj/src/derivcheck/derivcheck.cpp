#include "gevrey/derivcheck/derivcheck.hpp"

#include <cmath>
#include <memory>

#include "gevrey/coefficients/bound_constants.hpp"
#include "gevrey/common/errors.hpp"
#include "gevrey/common/parallel.hpp"
#include "gevrey/fem/mesh.hpp"

namespace gevrey::derivcheck {

namespace {

CandidateFit fit_one(const std::vector<double>& coeffs, const std::vector<std::size_t>& used, double delta) {
  const double n = static_cast<double>(used.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t k : used) {
    sx += std::pow(static_cast<double>(k), 1.0 / delta);
    sy += std::log(std::abs(coeffs[k]));
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k : used) {
    const double dx = std::pow(static_cast<double>(k), 1.0 / delta) - mx;
    const double dy = std::log(std::abs(coeffs[k])) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  CandidateFit fit;
  fit.delta = delta;
  const double slope = sxy / sxx;
  fit.r = -slope;
  fit.C = std::exp(my - slope * mx);
  fit.goodness = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return fit;
}

// Binomial coefficients with alternating signs for the order-p difference.
std::vector<double> difference_weights(unsigned p) {
  std::vector<double> w(p + 1);
  double c = 1.0;
  for (unsigned i = 0; i <= p; ++i) {
    w[i] = ((p - i) % 2 == 0 ? 1.0 : -1.0) * c;
    c = c * (p - i) / (i + 1);
  }
  return w;
}

double central_difference(const ScalarMap& f, double y0, unsigned p, double h) {
  const auto w = difference_weights(p);
  double acc = 0.0;
  for (unsigned i = 0; i <= p; ++i) acc += w[i] * f(y0 + (static_cast<double>(i) - 0.5 * p) * h);
  return acc / std::pow(h, static_cast<double>(p));
}

}  // namespace

std::vector<double> legendre_coeffs(const quad1d::GaussRule& rule, const std::vector<double>& values, std::size_t K) {
  if (rule.n < 2 * K) throw ValidationError("legendre_coeffs: need quad_n >= 2K");
  if (values.size() != rule.n) throw ValidationError("legendre_coeffs: one value per node required");
  std::vector<double> c(K + 1, 0.0);
  for (std::size_t i = 0; i < rule.n; ++i) {
    const double x = rule.nodes[i];
    const double wf = rule.weights[i] * values[i];
    double p_prev = 1.0, p = x;
    c[0] += wf;
    if (K >= 1) c[1] += wf * x;
    for (std::size_t k = 2; k <= K; ++k) {
      const double next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / static_cast<double>(k);
      p_prev = p;
      p = next;
      c[k] += wf * p;
    }
  }
  for (std::size_t k = 0; k <= K; ++k) c[k] *= (2.0 * k + 1.0) / 2.0;
  return c;
}

std::vector<double> legendre_coeffs(const ScalarMap& f, std::size_t K, std::size_t quad_n) {
  if (quad_n < 2 * K || quad_n == 0)
    throw ValidationError("legendre_coeffs: quad_n = " + std::to_string(quad_n) + " < 2K = " + std::to_string(2 * K));
  const auto rule = quad1d::gauss_legendre(quad_n);
  std::vector<double> values(rule.n);
  parallel_for(rule.n, [&](std::size_t i) { values[i] = f(rule.nodes[i]); });
  return legendre_coeffs(rule, values, K);
}

DecayFit classify_decay(const std::vector<double>& coeffs, const std::vector<double>& deltas) {
  if (deltas.empty()) throw ValidationError("classify_decay: no delta candidates");
  for (double d : deltas)
    if (!(d >= 1.0) || !std::isfinite(d)) throw ValidationError("classify_decay: delta candidates must be >= 1");
  DecayFit out;
  out.coeffs = coeffs;
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    if (std::abs(coeffs[k]) > kNoiseFloor) out.used.push_back(k);
  if (out.used.size() < 8)
    throw ValidationError("classify_decay: only " + std::to_string(out.used.size()) +
                          " coefficients above the noise floor 1e-13, need 8");
  for (double d : deltas) out.candidates.push_back(fit_one(coeffs, out.used, d));
  std::size_t best = 0;
  for (std::size_t i = 1; i < out.candidates.size(); ++i) {
    const auto& c = out.candidates[i];
    const auto& b = out.candidates[best];
    if (c.goodness > b.goodness || (c.goodness == b.goodness && c.delta < b.delta)) best = i;
  }
  out.best = out.candidates[best];
  return out;
}

FdResult fd_derivative(const ScalarMap& f, double y0, unsigned order, double h, double lo, double hi) {
  if (order > 6) throw ValidationError("fd_derivative: order must be <= 6");
  if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("fd_derivative: step must be positive");
  const double reach = 0.5 * order * h;
  if (y0 - reach < lo || y0 + reach > hi)
    throw ValidationError("fd_derivative: stencil [" + std::to_string(y0 - reach) + ", " + std::to_string(y0 + reach) +
                          "] leaves the domain [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  FdResult r;
  r.value = central_difference(f, y0, order, h);
  r.half_step = order == 0 ? r.value : central_difference(f, y0, order, 0.5 * h);
  r.richardson = (4.0 * r.half_step - r.value) / 3.0;
  r.consistency = std::abs(r.value - r.half_step);
  return r;
}

ScalarMap lambda1_along_first(const coefficients::CoefficientModel& model, std::size_t m,
                              const eigensolver::SolverOptions& opts) {
  auto mesh = std::make_shared<const fem::Mesh>(fem::build_mesh(m));
  return [&model, mesh, opts](double y) {
    const std::vector<double> yy{y};
    return eigensolver::smallest_eigenpair(fem::assemble(*mesh, model, yy), opts).lambda;
  };
}

std::vector<BoundCheck> check_derivative_bounds(const coefficients::CoefficientModel& model, std::size_t m, double y0,
                                                unsigned max_order, double h, std::size_t mu_samples,
                                                const eigensolver::SolverOptions& opts) {
  const auto g = model.gevrey_data();
  if (!g) throw ValidationError(model.name() + ": no Gevrey data for the theoretical bound");
  if (mu_samples < 2) throw ValidationError("check_derivative_bounds: need at least 2 gap samples");
  const auto box = model.parameter_box();
  std::vector<std::vector<double>> ys;
  for (std::size_t i = 0; i < mu_samples; ++i)
    ys.push_back({box.lo + (box.hi - box.lo) * static_cast<double>(i) / static_cast<double>(mu_samples - 1)});
  const double mu = eigensolver::estimate_gap(model, m, ys, opts).gap;
  // Discrete chi_1: smallest eigenvalue of the a = 1, b = 0, c = 1 system on this mesh.
  const auto reference = coefficients::CoefficientModel::constant(1.0, 0.0, 1.0);
  const double chi1_h = eigensolver::smallest_eigenvalue(reference, m, std::vector<double>{}, opts);
  const auto consts = coefficients::bound_constants(model, mu, chi1_h);
  const ScalarMap f = lambda1_along_first(model, m, opts);

  std::vector<BoundCheck> out;
  for (unsigned p = 1; p <= max_order; ++p) {
    BoundCheck c;
    c.order = p;
    c.mu = mu;
    c.observed = std::abs(fd_derivative(f, y0, p, h, box.lo, box.hi).richardson);
    c.bound = coefficients::theoretical_derivative_bound(consts, combinatorics::Multiindex{p}, g->delta, g->radii)
                  .lambda_bound;
    c.holds = c.observed <= c.bound;
    out.push_back(c);
  }
  return out;
}

}  // namespace gevrey::derivcheck
