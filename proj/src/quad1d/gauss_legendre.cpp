#include "gevrey/quad1d/gauss_legendre.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>

#include "gevrey/common/errors.hpp"
#include "gevrey/common/parallel.hpp"
#include "gevrey/fem/mesh.hpp"

namespace gevrey::quad1d {

double GaussRule::apply(const std::function<double(double)>& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += weights[i] * f(nodes[i]);
  return s;
}

std::pair<double, double> legendre_with_derivative(std::size_t n, double x) {
  if (n == 0) return {1.0, 0.0};
  double p0 = 1.0, p1 = x;
  for (std::size_t k = 2; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
    p0 = p1;
    p1 = p2;
  }
  // P_n' = n (x P_n - P_{n-1}) / (x^2 - 1), valid away from the endpoints.
  const double dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

GaussRule gauss_legendre(std::size_t n) {
  if (n < 1 || n > 512) throw ValidationError("gauss_legendre: n must lie in [1, 512], got " + std::to_string(n));
  constexpr double kNewtonTol = 1e-15;
  constexpr int kMaxNewton = 100;

  GaussRule rule;
  rule.n = n;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const double nd = static_cast<double>(n);
  for (std::size_t i = 1; i <= n / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) - 0.25) / (nd + 0.5));
    for (int it = 0; it < kMaxNewton; ++it) {
      const auto [p, dp] = legendre_with_derivative(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) <= kNewtonTol) break;
    }
    const double dp = legendre_with_derivative(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - i] = x;
    rule.nodes[i - 1] = -x;
    rule.weights[n - i] = w;
    rule.weights[i - 1] = w;
  }
  if (n % 2 == 1) {
    const double dp = legendre_with_derivative(n, 0.0).second;
    rule.nodes[n / 2] = 0.0;
    rule.weights[n / 2] = 2.0 / (dp * dp);
  }
  return rule;
}

GlStudyResult gl_study(const coefficients::CoefficientModel& model, std::size_t m,
                       const std::vector<std::size_t>& n_list, std::size_t n_star,
                       const eigensolver::SolverOptions& opts) {
  if (n_list.empty()) throw ValidationError("gl_study: empty n list");
  for (std::size_t n : n_list)
    if (n < 1 || n >= n_star)
      throw ValidationError("gl_study: every n must satisfy 1 <= n < n_star = " + std::to_string(n_star) +
                            ", got " + std::to_string(n));
  const auto mesh = fem::build_mesh(m);

  std::vector<GaussRule> rules;
  for (std::size_t n : n_list) rules.push_back(gauss_legendre(n));
  const GaussRule ref_rule = gauss_legendre(n_star);

  // Distinct nodes keyed by bit pattern; shared between all rules.
  std::map<std::uint64_t, double> lambda_at;
  auto collect = [&](const GaussRule& r) {
    for (double x : r.nodes) lambda_at.emplace(std::bit_cast<std::uint64_t>(x), 0.0);
  };
  collect(ref_rule);
  for (const auto& r : rules) collect(r);

  std::vector<std::uint64_t> keys;
  for (const auto& kv : lambda_at) keys.push_back(kv.first);
  std::vector<double> values(keys.size());
  parallel_for(keys.size(), [&](std::size_t k) {
    const double y = std::bit_cast<double>(keys[k]);
    const std::vector<double> yy{y};
    try {
      const auto sys = fem::assemble(mesh, model, yy);
      values[k] = eigensolver::smallest_eigenpair(sys, opts).lambda;
    } catch (const ValidationError& e) {
      throw ValidationError("gl_study node y = " + std::to_string(y) + ": " + e.what());
    } catch (const std::exception& e) {
      throw NumericalError("gl_study node y = " + std::to_string(y) + ": " + e.what());
    }
  });
  for (std::size_t k = 0; k < keys.size(); ++k) lambda_at[keys[k]] = values[k];

  auto integrate = [&](const GaussRule& r) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.n; ++i) s += r.weights[i] * lambda_at.at(std::bit_cast<std::uint64_t>(r.nodes[i]));
    return s;
  };

  GlStudyResult out;
  out.reference = integrate(ref_rule);
  out.distinct_solves = keys.size();
  for (std::size_t idx = 0; idx < rules.size(); ++idx)
    out.records.push_back({n_list[idx], std::abs(out.reference - integrate(rules[idx])) / std::abs(out.reference)});
  return out;
}

}  // namespace gevrey::quad1d
