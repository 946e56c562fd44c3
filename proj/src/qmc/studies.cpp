#include "gevrey/qmc/studies.hpp"

#include <cmath>

#include "gevrey/common/errors.hpp"
#include "gevrey/fem/mesh.hpp"

namespace gevrey::qmc {

namespace {

Integrand lambda1_integrand(const coefficients::CoefficientModel& model, const fem::Mesh& mesh, std::size_t s_used,
                            const eigensolver::SolverOptions& opts) {
  return [&model, &mesh, s_used, opts](std::span<const double> y) {
    const auto sys = fem::assemble(mesh, model, y.first(std::min(s_used, y.size())));
    return eigensolver::smallest_eigenpair(sys, opts).lambda;
  };
}

double relative_rmse(const std::vector<double>& values, double reference) {
  double acc = 0.0;
  for (double v : values) {
    const double d = (reference - v) / reference;
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(values.size()));
}

std::vector<std::uint64_t> vector_for(const RmseStudyConfig& cfg, std::uint64_t n) {
  if (!cfg.fixed_vector) return cbc_construct(cfg.s, n, cfg.weights).z;
  std::vector<std::uint64_t> z(cfg.s);
  for (std::size_t j = 0; j < cfg.s; ++j) {
    z[j] = cfg.fixed_vector->z[j] % n;
    if (z[j] == 0)
      throw ValidationError("generating vector entry " + std::to_string(j + 1) + " vanishes mod n = " +
                            std::to_string(n));
  }
  return z;
}

}  // namespace

PODWeights default_weights(const coefficients::CoefficientModel& model, std::size_t s) {
  PODWeights w;
  w.delta = model.kind() == coefficients::ModelKind::kQmcGevrey2 ? 2.0 : 1.0;
  if (const auto g = model.gevrey_data()) w.delta = g->delta;
  w.theta = 0.55;
  w.beta = parse_beta_rule("j^-5", s);
  return w;
}

RmseStudyResult rmse_study(const coefficients::CoefficientModel& model, const RmseStudyConfig& cfg) {
  if (cfg.n_list.empty()) throw ValidationError("rmse_study: empty level list");
  for (std::size_t k = 0; k < cfg.n_list.size(); ++k) {
    if (!is_power_of_two(cfg.n_list[k]) || cfg.n_list[k] < 2)
      throw ValidationError("rmse_study: levels must be powers of two >= 2");
    if (k > 0 && cfg.n_list[k] <= cfg.n_list[k - 1]) throw ValidationError("rmse_study: levels must ascend");
  }
  if (cfg.s == 0) throw ValidationError("rmse_study: s must be >= 1");
  if (cfg.shifts == 0) throw ValidationError("rmse_study: need at least one shift");
  if (cfg.run_mc && cfg.mc_replicates == 0) throw ValidationError("rmse_study: need at least one MC replicate");
  if (cfg.fixed_vector && cfg.fixed_vector->z.size() < cfg.s)
    throw ValidationError("rmse_study: generating vector shorter than s");
  if (!cfg.fixed_vector) {
    cfg.weights.validate();
    if (cfg.weights.beta.size() < cfg.s) throw ValidationError("rmse_study: need beta_1..beta_s");
  }

  const auto mesh = fem::build_mesh(cfg.m);
  const Integrand f = lambda1_integrand(model, mesh, cfg.s, cfg.solver);

  RmseStudyResult out;
  out.vector_source = cfg.fixed_vector ? "file" : "cbc";
  std::vector<Estimate> qmc_est(cfg.n_list.size());
  for (std::size_t k = 0; k < cfg.n_list.size(); ++k) out.vectors.push_back(vector_for(cfg, cfg.n_list[k]));

  const std::size_t top = cfg.n_list.size() - 1;
  for (std::size_t k = 0; k < cfg.n_list.size(); ++k) {
    if (!cfg.run_qmc && k != top) continue;
    const LatticeRule rule = make_lattice_rule(out.vectors[k], cfg.n_list[k], cfg.shifts, cfg.seed);
    qmc_est[k] = qmc_estimate(f, rule);
  }
  out.reference = qmc_est[top].mean;
  if (out.reference == 0.0) throw NumericalError("rmse_study: zero reference value");

  if (cfg.run_qmc)
    for (std::size_t k = 0; k < cfg.n_list.size(); ++k)
      out.qmc.push_back({cfg.n_list[k], relative_rmse(qmc_est[k].values, out.reference), qmc_est[k].values});

  if (cfg.run_mc) {
    for (std::uint64_t n : cfg.n_list) {
      const Estimate e = mc_estimate(f, cfg.s, n, cfg.seed, cfg.mc_replicates, cfg.shifts);
      out.mc.push_back({n, relative_rmse(e.values, out.reference), e.values});
    }
  }
  return out;
}

TruncationResult truncation_study(const coefficients::CoefficientModel& model, const TruncationConfig& cfg) {
  if (cfg.s_list.empty()) throw ValidationError("truncation_study: empty s list");
  for (std::size_t k = 0; k < cfg.s_list.size(); ++k) {
    if (cfg.s_list[k] == 0) throw ValidationError("truncation_study: s must be >= 1");
    if (k > 0 && cfg.s_list[k] <= cfg.s_list[k - 1]) throw ValidationError("truncation_study: s list must ascend");
  }
  if (cfg.s_ref <= cfg.s_list.back())
    throw ValidationError("truncation_study: reference dimension must exceed max(s_list) = " +
                          std::to_string(cfg.s_list.back()));
  cfg.weights.validate();
  if (cfg.weights.beta.size() < cfg.s_ref) throw ValidationError("truncation_study: need beta_1..beta_s_ref");

  const auto mesh = fem::build_mesh(cfg.m);
  const LatticeRule rule = make_lattice_rule(cbc_construct(cfg.s_ref, cfg.n, cfg.weights).z, cfg.n, cfg.shifts,
                                             cfg.seed);
  TruncationResult out;
  out.reference = qmc_estimate(lambda1_integrand(model, mesh, cfg.s_ref, cfg.solver), rule).mean;
  for (std::size_t s : cfg.s_list) {
    const double est = qmc_estimate(lambda1_integrand(model, mesh, s, cfg.solver), rule).mean;
    out.records.push_back({s, est, std::abs(out.reference - est)});
  }
  return out;
}

}  // namespace gevrey::qmc
