#include "gevrey/harness/experiments.hpp"

#include <cmath>
#include <stdexcept>

#include "gevrey/combinatorics/falling_factorial.hpp"
#include "gevrey/common/errors.hpp"
#include "gevrey/derivcheck/derivcheck.hpp"
#include "gevrey/fem/mesh.hpp"
#include "gevrey/fem/sparse.hpp"
#include "gevrey/qmc/lattice.hpp"
#include "gevrey/qmc/studies.hpp"
#include "gevrey/quad1d/gauss_legendre.hpp"

namespace gevrey::harness {

namespace {

std::string num(double v) { return format_number(v); }

std::vector<std::string> common_metadata(const RunConfig& cfg) {
  return {"experiment: " + std::string(experiment_name(cfg.experiment)),
          "model: " + cfg.model + (cfg.model == "custom" ? " (" + cfg.custom_file + ")" : ""),
          "m: " + std::to_string(cfg.m), "solver: " + cfg.solver + ", tol " + num(cfg.tol)};
}

std::string fit_line(const std::string& what, const RateFit& f) {
  return what + ": slope " + num(f.slope) + ", intercept " + num(f.intercept) + ", r^2 " + num(f.r_squared) + " (" +
         std::string(transform_name(f.transform)) + ", " + std::to_string(f.points) + " points)";
}

qmc::PODWeights weights_for(const RunConfig& cfg, const coefficients::CoefficientModel* model, std::size_t s) {
  qmc::PODWeights w;
  if (model) w = qmc::default_weights(*model, s);
  if (cfg.delta) w.delta = *cfg.delta;
  w.theta = cfg.theta;
  w.beta = qmc::parse_beta_rule(cfg.beta, s);
  w.validate();
  return w;
}

std::string weights_text(const qmc::PODWeights& w, const RunConfig& cfg) {
  return "POD weights: delta " + num(w.delta) + ", theta " + num(w.theta) + ", beta " + cfg.beta;
}

}  // namespace

coefficients::CoefficientModel make_model(const RunConfig& cfg) {
  if (cfg.model == "custom") return coefficients::CoefficientModel::load_custom(cfg.custom_file);
  return coefficients::CoefficientModel::from_name(cfg.model);
}

eigensolver::SolverOptions solver_options(const RunConfig& cfg) {
  eigensolver::SolverOptions o;
  o.tol = cfg.tol;
  o.max_iter = cfg.max_iter;
  o.inner = cfg.solver == "pcg" ? eigensolver::InnerSolver::kPcgJacobi : eigensolver::InnerSolver::kBandedCholesky;
  return o;
}

ExperimentResult run_gl_study(const RunConfig& cfg) {
  const auto model = make_model(cfg);
  std::vector<std::size_t> ns;
  for (std::size_t n = cfg.n_min; n <= cfg.n_max; ++n) ns.push_back(n);
  const auto res = quad1d::gl_study(model, cfg.m, ns, cfg.n_star, solver_options(cfg));

  ExperimentResult out;
  Table t;
  t.metadata = common_metadata(cfg);
  t.metadata.push_back("n_star: " + std::to_string(cfg.n_star));
  t.metadata.push_back("reference: " + num(res.reference));
  t.metadata.push_back("distinct solves: " + std::to_string(res.distinct_solves));
  t.columns = {"n", "error"};
  for (const auto& r : res.records) t.add_row({static_cast<double>(r.n), r.error});
  out.table = std::move(t);

  out.transform =
      model.kind() == coefficients::ModelKind::kGlGevrey3 ? Transform::kLogVsCubeRootN : Transform::kLogVsN;
  std::vector<RatePoint> all, window;
  for (const auto& r : res.records) {
    all.push_back({static_cast<double>(r.n), r.error});
    if (r.n >= cfg.fit_min && r.n <= cfg.fit_max) window.push_back(all.back());
  }
  out.summary.push_back("reference Q_" + std::to_string(cfg.n_star) + " = " + num(res.reference));
  try {
    out.summary.push_back(fit_line("fit over n = " + std::to_string(cfg.fit_min) + ".." + std::to_string(cfg.fit_max),
                                   fit_rate(window, out.transform)));
  } catch (const ValidationError& e) {
    out.summary.push_back(std::string("no fit: ") + e.what());
  }
  out.plot = {{"relative error", all}};
  out.title = "Gauss-Legendre error, " + cfg.model + ", m = " + std::to_string(cfg.m);
  out.x_label = out.transform == Transform::kLogVsN ? "n" : "n^(1/3)";
  return out;
}

ExperimentResult run_qmc_study(const RunConfig& cfg) {
  const auto model = make_model(cfg);
  const bool mc_only = cfg.experiment == Experiment::kMcStudy;
  qmc::RmseStudyConfig sc;
  sc.m = cfg.m;
  sc.s = cfg.s;
  for (std::size_t l = cfg.level_min; l <= cfg.level_max; ++l) sc.n_list.push_back(std::uint64_t{1} << l);
  sc.shifts = cfg.shifts;
  sc.mc_replicates = cfg.mc_replicates;
  sc.seed = cfg.seed;
  sc.run_qmc = !mc_only;
  sc.run_mc = true;
  sc.weights = weights_for(cfg, &model, cfg.s);
  if (!cfg.vector_in.empty()) {
    auto gv = qmc::read_generating_vector(cfg.vector_in);
    if (gv.n < sc.n_list.back())
      throw ValidationError(cfg.vector_in + ": vector built for n = " + std::to_string(gv.n) +
                            ", smaller than the top level " + std::to_string(sc.n_list.back()));
    sc.fixed_vector = std::move(gv);
  }
  sc.solver = solver_options(cfg);
  const auto res = qmc::rmse_study(model, sc);

  if (!cfg.vector_out.empty())
    qmc::write_generating_vector(cfg.vector_out, res.vectors.back(), sc.n_list.back());

  ExperimentResult out;
  Table t;
  t.metadata = common_metadata(cfg);
  t.metadata.push_back("s: " + std::to_string(cfg.s) + ", levels 2^" + std::to_string(cfg.level_min) + "..2^" +
                       std::to_string(cfg.level_max));
  t.metadata.push_back("shifts: " + std::to_string(cfg.shifts) + ", mc replicates: " +
                       std::to_string(cfg.mc_replicates) + ", seed: " + std::to_string(cfg.seed));
  t.metadata.push_back("generating vector: " +
                       (res.vector_source == "file" ? "file " + cfg.vector_in + " (mod n)"
                                                    : "CBC per level, " + weights_text(sc.weights, cfg)));
  std::string top = "top-level z:";
  for (auto z : res.vectors.back()) top += " " + std::to_string(z);
  t.metadata.push_back(top);
  t.metadata.push_back("reference (top-level QMC mean): " + num(res.reference));
  if (mc_only) {
    t.columns = {"n", "rmse_mc"};
    for (const auto& r : res.mc) t.add_row({static_cast<double>(r.n), r.rmse});
  } else {
    t.columns = {"n", "rmse_qmc", "rmse_mc"};
    for (std::size_t k = 0; k < res.qmc.size(); ++k)
      t.add_row({static_cast<double>(res.qmc[k].n), res.qmc[k].rmse, res.mc[k].rmse});
  }
  out.table = std::move(t);

  out.transform = Transform::kLogLog;
  std::vector<RatePoint> q, m;
  for (const auto& r : res.qmc) q.push_back({static_cast<double>(r.n), r.rmse});
  for (const auto& r : res.mc) m.push_back({static_cast<double>(r.n), r.rmse});
  out.summary.push_back("reference = " + num(res.reference));
  for (const auto& [label, pts] : {std::pair{std::string("QMC"), q}, std::pair{std::string("MC"), m}}) {
    if (pts.empty()) continue;
    try {
      out.summary.push_back(fit_line(label + " rmse", fit_rate(pts, Transform::kLogLog)));
    } catch (const ValidationError& e) {
      out.summary.push_back(label + ": no fit: " + e.what());
    }
    out.plot.push_back({label, pts});
  }
  out.title = std::string(mc_only ? "MC" : "QMC vs MC") + " relative RMSE, " + cfg.model;
  out.x_label = "log n";
  return out;
}

ExperimentResult run_trunc_study(const RunConfig& cfg) {
  const auto model = make_model(cfg);
  qmc::TruncationConfig tc;
  tc.m = cfg.m;
  tc.s_list = cfg.s_list;
  tc.s_ref = cfg.s_ref;
  tc.n = cfg.n;
  tc.shifts = cfg.shifts;
  tc.seed = cfg.seed;
  tc.weights = weights_for(cfg, &model, cfg.s_ref);
  tc.solver = solver_options(cfg);
  const auto res = qmc::truncation_study(model, tc);

  ExperimentResult out;
  Table t;
  t.metadata = common_metadata(cfg);
  t.metadata.push_back("s_ref: " + std::to_string(cfg.s_ref) + ", n: " + std::to_string(cfg.n) + ", shifts: " +
                       std::to_string(cfg.shifts) + ", seed: " + std::to_string(cfg.seed));
  t.metadata.push_back("generating vector: CBC, " + weights_text(tc.weights, cfg));
  t.metadata.push_back("reference I_s_ref: " + num(res.reference));
  t.columns = {"s", "estimate", "error"};
  std::vector<RatePoint> pts;
  for (const auto& r : res.records) {
    t.add_row({static_cast<double>(r.s), r.estimate, r.error});
    pts.push_back({static_cast<double>(r.s), r.error});
  }
  out.table = std::move(t);
  out.transform = Transform::kLogLog;
  try {
    out.summary.push_back(fit_line("truncation error", fit_rate(pts, Transform::kLogLog)));
  } catch (const ValidationError& e) {
    out.summary.push_back(std::string("no fit: ") + e.what());
  }
  out.plot = {{"|I_ref - I_s|", pts}};
  out.title = "Truncation error, " + cfg.model;
  out.x_label = "log s";
  return out;
}

namespace {

ExperimentResult run_combinatorics_checks(const RunConfig& cfg) {
  using namespace combinatorics;
  ExperimentResult out;
  Table t;
  t.metadata = {"experiment: checks combinatorics", "n_max: " + std::to_string(cfg.n_max),
                "nu_max: " + std::to_string(cfg.nu_max) + ", dim_max: " + std::to_string(cfg.dim_max)};
  t.columns = {"check", "cases", "failures"};
  const auto row = [&](const std::string& name, std::size_t cases, std::size_t failures) {
    t.rows.push_back({name, std::to_string(cases), std::to_string(failures)});
    out.summary.push_back((failures == 0 ? "PASS " : "FAIL ") + name + ": " + std::to_string(cases) + " cases, " +
                          std::to_string(failures) + " failures");
    if (failures) out.passed = false;
  };

  std::size_t cases = 0, fails = 0;
  for (unsigned n = 0; n <= cfg.n_max; ++n) {
    ++cases;
    const Rational x = xi(static_cast<unsigned>(n));
    const Rational upper(BigInt(2) * (BigInt(1) << n));
    if (ff_half(n) * x != Rational(factorial(n)) || x < Rational(1) || x > upper) ++fails;
  }
  row("xi_n [1/2]_n = n!, 1 <= xi_n <= 2^(n+1)", cases, fails);

  cases = fails = 0;
  for (SumRange r : {SumRange::kInner, SumRange::kMid, SumRange::kFull}) {
    const Rational c(falling_factorial_sum_factor(r));
    for (unsigned n = 0; n <= cfg.n_max; ++n) {
      ++cases;
      const Rational lhs = falling_factorial_sum(n, r);
      const bool ok = n >= 2 ? lhs == c * ff_half(n) : lhs <= c * ff_half(n);
      if (!ok) ++fails;
    }
  }
  row("binomial falling-factorial sums = {2,3,4} [1/2]_n", cases, fails);

  std::size_t v_cases = 0, v_fails = 0, b3_cases = 0, b3_fails = 0, b8_cases = 0, b8_fails = 0;
  for (std::size_t dim = 1; dim <= cfg.dim_max; ++dim) {
    for (const auto& nu : all_multiindices(dim, static_cast<unsigned>(cfg.nu_max))) {
      for (unsigned r = 0; r <= nu.order(); ++r) {
        ++v_cases;
        try {
          if (vandermonde_slice(nu, r) != binomial(nu.order(), r)) ++v_fails;
        } catch (const std::logic_error&) {
          ++v_fails;
        }
      }
      ++b3_cases;
      const auto b3 = multiindex_bound_3(nu);
      if (b3.lhs > b3.rhs || b3.equal != (nu.order() >= 2)) ++b3_fails;
      ++b8_cases;
      const auto b8 = multiindex_bound_8(nu);
      if (b8.lhs > b8.rhs) ++b8_fails;
    }
  }
  row("sum_{|m|=r} binom(nu,m) = binom(|nu|,r)", v_cases, v_fails);
  row("3-term bound, equality iff |nu| >= 2", b3_cases, b3_fails);
  row("8-term bound", b8_cases, b8_fails);

  const std::vector<double> grid{-2.5, -1.0, -0.5, 0.0, 0.5, 0.9};
  const unsigned sqrt_n = static_cast<unsigned>(std::min<std::size_t>(cfg.n_max, 30));
  const auto rep = sqrt_series_check(sqrt_n, grid);
  std::size_t s_fails = 0;
  for (const auto& r : rep.rows)
    if (!(r.bound_holds && r.closed_form_agrees && (!r.equality_expected || r.equality_holds))) ++s_fails;
  row("|g^(n)| <= |f^(n)| for f = (1 - sqrt(1-y))/2, g = f^2", rep.rows.size(), s_fails);
  out.table = std::move(t);
  return out;
}

ExperimentResult run_gevrey_checks(const RunConfig& cfg) {
  const auto model = make_model(cfg);
  const auto opts = solver_options(cfg);
  const auto box = model.parameter_box();
  const auto lambda = derivcheck::lambda1_along_first(model, cfg.m, opts);
  // Legendre expansion on [-1, 1] of t -> lambda_1 at the affine image of t in the box.
  const auto on_box = [&](double t) { return lambda(box.lo + 0.5 * (t + 1.0) * (box.hi - box.lo)); };
  const auto coeffs = derivcheck::legendre_coeffs(on_box, cfg.K, cfg.quad_n);

  ExperimentResult out;
  Table t;
  t.metadata = common_metadata(cfg);
  t.metadata.push_back("K: " + std::to_string(cfg.K) + ", quad_n: " + std::to_string(cfg.quad_n));
  t.columns = {"k", "abs_coeff"};
  std::vector<RatePoint> pts;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    t.add_row({static_cast<double>(k), std::abs(coeffs[k])});
    pts.push_back({static_cast<double>(k), std::abs(coeffs[k])});
  }

  const auto fit = derivcheck::classify_decay(coeffs, cfg.deltas);
  t.metadata.push_back("classified delta: " + num(fit.best.delta));
  out.table = std::move(t);
  out.summary.push_back("classified delta = " + num(fit.best.delta) + " (r " + num(fit.best.r) + ", C " +
                        num(fit.best.C) + ", goodness " + num(fit.best.goodness) + ", " +
                        std::to_string(fit.used.size()) + " coefficients above 1e-13)");
  for (const auto& c : fit.candidates)
    out.summary.push_back("  delta " + num(c.delta) + ": goodness " + num(c.goodness) + ", r " + num(c.r));

  if (model.gevrey_data() && cfg.max_order > 0) {
    const double y0 = 0.5 * (box.lo + box.hi);
    const auto checks =
        derivcheck::check_derivative_bounds(model, cfg.m, y0, static_cast<unsigned>(cfg.max_order), cfg.fd_step, 9, opts);
    out.summary.push_back("derivative bounds at y_1 = " + num(y0) + " (mu measured on 9 samples; only the "
                          "direction observed <= bound is checked)");
    for (const auto& c : checks) {
      out.summary.push_back(std::string(c.holds ? "  PASS" : "  FAIL") + " order " + std::to_string(c.order) +
                            ": observed " + num(c.observed) + " <= bound " + num(c.bound) + " (mu " + num(c.mu) + ")");
      if (!c.holds) out.passed = false;
    }
  }
  out.plot = {{"|c_k|", pts}};
  out.transform = fit.best.delta == 1.0 ? Transform::kLogVsN : Transform::kLogVsCubeRootN;
  out.title = "Legendre coefficients of lambda_1, " + cfg.model;
  out.x_label = out.transform == Transform::kLogVsN ? "k" : "k^(1/3)";
  return out;
}

}  // namespace

ExperimentResult run_checks(const RunConfig& cfg) {
  return cfg.check == "gevrey" ? run_gevrey_checks(cfg) : run_combinatorics_checks(cfg);
}

ExperimentResult run_solve_evp(const RunConfig& cfg) {
  const auto model = make_model(cfg);
  const auto opts = solver_options(cfg);
  const auto sys = fem::assemble(fem::build_mesh(cfg.m), model, cfg.y);
  if (!cfg.matrix_out.empty()) {
    fem::write_matrix_market(sys.A, cfg.matrix_out + "_A.mtx");
    fem::write_matrix_market(sys.M, cfg.matrix_out + "_M.mtx");
  }
  ExperimentResult out;
  const auto p1 = eigensolver::smallest_eigenpair(sys, opts);
  out.summary.push_back("n_dof " + std::to_string(sys.n_dof));
  out.summary.push_back("lambda1 " + num(p1.lambda) + " iterations " + std::to_string(p1.iterations) + " residual " +
                        num(p1.residual));
  if (cfg.second) {
    const auto p2 = eigensolver::second_eigenpair(sys, p1, opts);
    out.summary.push_back("lambda2 " + num(p2.lambda) + " iterations " + std::to_string(p2.iterations) + " residual " +
                          num(p2.residual));
    out.summary.push_back("gap " + num(1.0 - p1.lambda / p2.lambda));
  }
  if (!cfg.eigvec_out.empty()) eigensolver::write_eigenvector(cfg.eigvec_out, p1.u);
  return out;
}

ExperimentResult run_cbc(const RunConfig& cfg) {
  const auto w = weights_for(cfg, nullptr, cfg.s);
  const auto res = qmc::cbc_construct(cfg.s, cfg.n, w);
  ExperimentResult out;
  if (!cfg.out.empty()) {
    qmc::write_generating_vector(cfg.out, res.z, cfg.n);
  } else {
    out.summary.push_back("# " + std::to_string(cfg.s) + " " + std::to_string(cfg.n));
    for (auto z : res.z) out.summary.push_back(std::to_string(z));
  }
  out.summary.push_back((cfg.out.empty() ? "# " : "") + std::string("worst-case error ") + num(res.error.back()) +
                        " (" + weights_text(w, cfg) + ")");
  return out;
}

ExperimentResult run_experiment(const RunConfig& cfg) {
  validate(cfg);
  switch (cfg.experiment) {
    case Experiment::kGlStudy:
      return run_gl_study(cfg);
    case Experiment::kQmcStudy:
    case Experiment::kMcStudy:
      return run_qmc_study(cfg);
    case Experiment::kTruncStudy:
      return run_trunc_study(cfg);
    case Experiment::kChecks:
      return run_checks(cfg);
    case Experiment::kSolveEvp:
      return run_solve_evp(cfg);
    case Experiment::kCbc:
      return run_cbc(cfg);
  }
  throw ValidationError("unknown experiment");
}

bool write_outputs(const RunConfig& cfg, const ExperimentResult& result) {
  if (!cfg.svg.empty()) {
    if (result.plot.empty()) throw ValidationError("svg: this experiment has nothing to plot");
    emit_svg(result.plot, result.transform, result.title, result.x_label, cfg.svg);
  }
  if (!result.table || cfg.out.empty() || cfg.experiment == Experiment::kCbc) return false;
  emit_csv(*result.table, cfg.out);
  return true;
}

}  // namespace gevrey::harness
