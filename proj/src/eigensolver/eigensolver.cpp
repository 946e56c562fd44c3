#include "gevrey/eigensolver/eigensolver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <string>

#include "gevrey/common/parallel.hpp"
#include "gevrey/eigensolver/linear_solvers.hpp"

namespace gevrey::eigensolver {

namespace {

using Extended = long double;

// y = A x with extended accumulation; the stiffness rows cancel heavily.
void multiply_ext(const fem::CsrMatrix& a, std::span<const double> x, std::vector<Extended>& y) {
  y.assign(a.n, 0.0L);
  for (std::size_t i = 0; i < a.n; ++i) {
    Extended s = 0.0L;
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) s += Extended(a.val[k]) * x[a.col[k]];
    y[i] = s;
  }
}

Extended dot_ext(std::span<const double> x, const std::vector<Extended>& y) {
  Extended s = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

struct Rayleigh {
  double lambda = 0.0;
  double residual = 0.0;
};

// Rayleigh quotient and ||A x - lambda M x|| / ||x||.
Rayleigh rayleigh(const fem::SparseSystem& sys, std::span<const double> x, const std::vector<double>* deflate_mu) {
  std::vector<Extended> ax, mx;
  multiply_ext(sys.A, x, ax);
  multiply_ext(sys.M, x, mx);
  const Extended num = dot_ext(x, ax);
  const Extended den = dot_ext(x, mx);
  const Extended lam = num / den;
  std::vector<Extended> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = ax[i] - lam * mx[i];
  if (deflate_mu) {
    // Remove the component along M u1 so only the deflated subspace counts.
    const auto& mu1 = *deflate_mu;
    Extended c = 0.0L, nn = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) nn += Extended(mu1[i]) * mu1[i];
    for (std::size_t i = 0; i < x.size(); ++i) c += r[i] * mu1[i];
    for (std::size_t i = 0; i < x.size(); ++i) r[i] -= c / nn * mu1[i];
  }
  Extended rn = 0.0L, xn = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    rn += r[i] * r[i];
    xn += Extended(x[i]) * x[i];
  }
  return {static_cast<double>(lam), static_cast<double>(std::sqrt(rn / xn))};
}

double m_norm(const fem::CsrMatrix& m, std::span<const double> x) {
  std::vector<Extended> mx;
  multiply_ext(m, x, mx);
  return static_cast<double>(std::sqrt(dot_ext(x, mx)));
}

class InnerSolve {
 public:
  InnerSolve(const fem::CsrMatrix& a, const SolverOptions& opts) : a_(a), opts_(opts) {
    if (opts.inner == InnerSolver::kBandedCholesky) chol_ = std::make_unique<BandedCholesky>(a);
  }

  void operator()(std::span<const double> b, std::span<double> x) const {
    if (chol_) {
      chol_->solve(b, x);
      return;
    }
    // Warm start from the previous iterate's direction is not used: x is
    // zeroed so every solve is the same function of b.
    std::fill(x.begin(), x.end(), 0.0);
    const double rel = opts_.tol / 100.0;
    const auto res = pcg_solve(a_, b, x, rel, 20 * a_.n + 100);
    // Below ~1e-15 the recursive residual stagnates at roundoff; accept that.
    if (!res.converged && !(res.relative_residual <= kStagnationFloor))
      throw NumericalError("inner PCG solve stalled at relative residual " + std::to_string(res.relative_residual));
  }

 private:
  static constexpr double kStagnationFloor = 1e-13;
  const fem::CsrMatrix& a_;
  SolverOptions opts_;
  std::unique_ptr<BandedCholesky> chol_;
};

void check_options(const fem::SparseSystem& sys, const SolverOptions& opts) {
  if (!(opts.tol > 0.0)) throw ValidationError("eigensolver: tol must be positive");
  if (opts.max_iter == 0) throw ValidationError("eigensolver: max_iter must be positive");
  if (sys.n_dof == 0 || sys.A.n != sys.n_dof || sys.M.n != sys.n_dof)
    throw ValidationError("eigensolver: empty or inconsistent system");
}

double row_sum_norm(const fem::CsrMatrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.n; ++i) {
    double s = 0.0;
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) s += std::abs(a.val[k]);
    best = std::max(best, s);
  }
  return best;
}

// 10 tol lambda, unless that is below what double arithmetic can resolve.
bool residual_ok(const fem::SparseSystem& sys, double residual, double lambda, double tol) {
  constexpr double kFloor = 64.0 * std::numeric_limits<double>::epsilon();
  const double floor = kFloor * (row_sum_norm(sys.A) + lambda * row_sum_norm(sys.M));
  return residual <= std::max(10.0 * tol * lambda, floor);
}

void scale(std::vector<double>& x, double s) {
  for (double& v : x) v *= s;
}

// x -= (u1^T M x) u1, given mu1 = M u1.
void project_out(std::vector<double>& x, const std::vector<double>& u1, const std::vector<double>& mu1) {
  Extended c = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) c += Extended(mu1[i]) * x[i];
  const double cd = static_cast<double>(c);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= cd * u1[i];
}

constexpr std::size_t kBlockSize = 4;

// Eigen-decomposition of a small symmetric matrix (row-major, p x p) by cyclic
// Jacobi rotations. Returns eigenvalues ascending; vecs holds columns.
void jacobi_eigen(std::vector<double> a, std::size_t p, std::vector<double>& vals, std::vector<double>& vecs) {
  vecs.assign(p * p, 0.0);
  for (std::size_t i = 0; i < p; ++i) vecs[i * p + i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j) off += a[i * p + j] * a[i * p + j];
    if (off == 0.0) break;
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j) {
        const double aij = a[i * p + j];
        if (aij == 0.0) continue;
        const double theta = (a[j * p + j] - a[i * p + i]) / (2.0 * aij);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < p; ++k) {
          const double aki = a[k * p + i], akj = a[k * p + j];
          a[k * p + i] = c * aki - s * akj;
          a[k * p + j] = s * aki + c * akj;
        }
        for (std::size_t k = 0; k < p; ++k) {
          const double aik = a[i * p + k], ajk = a[j * p + k];
          a[i * p + k] = c * aik - s * ajk;
          a[j * p + k] = s * aik + c * ajk;
        }
        for (std::size_t k = 0; k < p; ++k) {
          const double vki = vecs[k * p + i], vkj = vecs[k * p + j];
          vecs[k * p + i] = c * vki - s * vkj;
          vecs[k * p + j] = s * vki + c * vkj;
        }
      }
  }
  std::vector<std::size_t> order(p);
  for (std::size_t i = 0; i < p; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return a[l * p + l] < a[r * p + r]; });
  std::vector<double> sorted_vecs(p * p);
  vals.resize(p);
  for (std::size_t c = 0; c < p; ++c) {
    vals[c] = a[order[c] * p + order[c]];
    for (std::size_t k = 0; k < p; ++k) sorted_vecs[k * p + c] = vecs[k * p + order[c]];
  }
  vecs.swap(sorted_vecs);
}

struct RitzResult {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;  // M-orthonormal
};

// Rayleigh-Ritz for the pencil (A, M) on span(y).
RitzResult rayleigh_ritz(const fem::SparseSystem& sys, const std::vector<std::vector<double>>& y) {
  const std::size_t p = y.size();
  const std::size_t n = sys.n_dof;
  std::vector<std::vector<Extended>> ay(p), my(p);
  for (std::size_t c = 0; c < p; ++c) {
    multiply_ext(sys.A, y[c], ay[c]);
    multiply_ext(sys.M, y[c], my[c]);
  }
  std::vector<double> ga(p * p), gm(p * p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i; j < p; ++j) {
      // Symmetrized Gram entries.
      const Extended a = (dot_ext(y[i], ay[j]) + dot_ext(y[j], ay[i])) / 2;
      const Extended m = (dot_ext(y[i], my[j]) + dot_ext(y[j], my[i])) / 2;
      ga[i * p + j] = ga[j * p + i] = static_cast<double>(a);
      gm[i * p + j] = gm[j * p + i] = static_cast<double>(m);
    }
  // gm = L L^T, then the standard problem L^-1 ga L^-T.
  std::vector<double> l(p * p, 0.0);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double s = gm[i * p + j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i * p + k] * l[j * p + k];
      if (i == j) {
        if (!(s > 1e-14 * gm[i * p + i]))
          throw NumericalError("second_eigenpair: deflated block lost rank");
        l[i * p + i] = std::sqrt(s);
      } else {
        l[i * p + j] = s / l[j * p + j];
      }
    }
  // t = L^-1 ga, then c = t L^-T.
  std::vector<double> t(p * p), c(p * p);
  for (std::size_t col = 0; col < p; ++col)
    for (std::size_t i = 0; i < p; ++i) {
      double s = ga[i * p + col];
      for (std::size_t k = 0; k < i; ++k) s -= l[i * p + k] * t[k * p + col];
      t[i * p + col] = s / l[i * p + i];
    }
  for (std::size_t row = 0; row < p; ++row)
    for (std::size_t i = 0; i < p; ++i) {
      double s = t[row * p + i];
      for (std::size_t k = 0; k < i; ++k) s -= l[i * p + k] * c[row * p + k];
      c[row * p + i] = s / l[i * p + i];
    }
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) c[i * p + j] = c[j * p + i] = 0.5 * (c[i * p + j] + c[j * p + i]);

  RitzResult out;
  std::vector<double> w;
  jacobi_eigen(c, p, out.values, w);
  // Coefficients z = L^-T w, columnwise.
  std::vector<double> z(p * p);
  for (std::size_t col = 0; col < p; ++col)
    for (std::size_t ii = p; ii-- > 0;) {
      double s = w[ii * p + col];
      for (std::size_t k = ii + 1; k < p; ++k) s -= l[k * p + ii] * z[k * p + col];
      z[ii * p + col] = s / l[ii * p + ii];
    }
  out.vectors.assign(p, std::vector<double>(n, 0.0));
  for (std::size_t col = 0; col < p; ++col)
    for (std::size_t k = 0; k < p; ++k) {
      const double coef = z[k * p + col];
      for (std::size_t i = 0; i < n; ++i) out.vectors[col][i] += coef * y[k][i];
    }
  return out;
}

EigenPair inverse_iteration(const fem::SparseSystem& sys, std::vector<double> x, const SolverOptions& opts) {
  check_options(sys, opts);
  const InnerSolve solve(sys.A, opts);
  double nrm = m_norm(sys.M, x);
  if (!(nrm > 0.0)) throw NumericalError("inverse iteration: start vector has zero M-norm");
  scale(x, 1.0 / nrm);

  EigenPair pair;
  pair.u = x;
  Rayleigh rq = rayleigh(sys, x, nullptr);
  pair.lambda = rq.lambda;
  pair.residual = rq.residual;

  std::vector<double> b(sys.n_dof), y(sys.n_dof);
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    sys.M.multiply(x, b);
    solve(b, y);
    nrm = m_norm(sys.M, y);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) throw NumericalError("inverse iteration: iterate lost (zero or nonfinite)");
    scale(y, 1.0 / nrm);
    x.swap(y);

    const double prev = pair.lambda;
    rq = rayleigh(sys, x, nullptr);
    pair.u = x;
    pair.lambda = rq.lambda;
    pair.residual = rq.residual;
    pair.iterations = it;
    if (!(rq.lambda > 0.0)) throw NumericalError("inverse iteration: nonpositive Rayleigh quotient, system not SPD");
    if (std::abs(rq.lambda - prev) <= opts.tol && residual_ok(sys, rq.residual, rq.lambda, opts.tol)) return pair;
  }
  throw ConvergenceError("inverse iteration: no convergence after " + std::to_string(opts.max_iter) +
                             " iterations (last lambda " + std::to_string(pair.lambda) + ", residual " +
                             std::to_string(pair.residual) + ")",
                         pair);
}

}  // namespace

EigenPair smallest_eigenpair(const fem::SparseSystem& sys, const SolverOptions& opts) {
  return inverse_iteration(sys, std::vector<double>(sys.n_dof, 1.0), opts);
}

EigenPair second_eigenpair(const fem::SparseSystem& sys, const EigenPair& first, const SolverOptions& opts) {
  check_options(sys, opts);
  if (first.u.size() != sys.n_dof) throw ValidationError("second_eigenpair: first eigenvector has wrong size");
  const std::size_t n = sys.n_dof;
  if (n < 2) throw ValidationError("second_eigenpair: system has a single degree of freedom");
  // Block inverse iteration in the M-complement of u1 with Rayleigh-Ritz, so a
  // near-double lambda2 (as on the square) does not stall the iterate.
  const std::size_t p = std::min<std::size_t>(kBlockSize, n - 1);
  const InnerSolve solve(sys.A, opts);
  const auto mu1 = sys.M.multiply(first.u);

  std::vector<std::vector<double>> x(p, std::vector<double>(n));
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  for (auto& col : x)
    for (double& v : col) {
      state = state * 6364136223846793005ULL + 1442695040888963407ULL;
      v = static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
    }
  for (auto& col : x) project_out(col, first.u, mu1);

  EigenPair pair;
  double prev = 0.0;
  std::vector<double> b(n);
  std::vector<std::vector<double>> y(p, std::vector<double>(n));
  for (std::size_t it = 0; it <= opts.max_iter; ++it) {
    if (it == 0) {
      y = x;
    } else {
      for (std::size_t c = 0; c < p; ++c) {
        sys.M.multiply(x[c], b);
        solve(b, y[c]);
        const double before = m_norm(sys.M, y[c]);
        project_out(y[c], first.u, mu1);
        const double after = m_norm(sys.M, y[c]);
        if (!(after > 1e-10 * before))
          throw NumericalError("second_eigenpair: deflated iterate collapsed (lambda2 numerically equal to lambda1)");
      }
    }
    const auto ritz = rayleigh_ritz(sys, y);
    x = ritz.vectors;
    // A second projection keeps u1 out to roundoff after the recombination.
    project_out(x[0], first.u, mu1);
    scale(x[0], 1.0 / m_norm(sys.M, x[0]));

    const Rayleigh rq = rayleigh(sys, x[0], &mu1);
    pair.u = x[0];
    pair.lambda = rq.lambda;
    pair.residual = rq.residual;
    pair.iterations = it;
    if (!(rq.lambda > 0.0)) throw NumericalError("second_eigenpair: nonpositive Rayleigh quotient, system not SPD");
    if (it > 0 && std::abs(rq.lambda - prev) <= opts.tol && residual_ok(sys, rq.residual, rq.lambda, opts.tol))
      return pair;
    prev = rq.lambda;
  }
  throw ConvergenceError("second_eigenpair: no convergence after " + std::to_string(opts.max_iter) +
                             " iterations (last lambda " + std::to_string(pair.lambda) + ", residual " +
                             std::to_string(pair.residual) + ")",
                         pair);
}

double smallest_eigenvalue(const coefficients::CoefficientModel& model, std::size_t m, std::span<const double> y,
                           const SolverOptions& opts) {
  const auto sys = fem::assemble(fem::build_mesh(m), model, y);
  return smallest_eigenpair(sys, opts).lambda;
}

GapReport estimate_gap(const coefficients::CoefficientModel& model, std::size_t m,
                       const std::vector<std::vector<double>>& y_samples, const SolverOptions& opts) {
  if (y_samples.empty()) throw ValidationError("estimate_gap: need at least one parameter sample");
  const auto mesh = fem::build_mesh(m);
  for (const auto& y : y_samples) model.validate_parameters(y);

  GapReport rep;
  rep.lambda1_samples.assign(y_samples.size(), 0.0);
  rep.lambda2_samples.assign(y_samples.size(), 0.0);
  parallel_for(y_samples.size(), [&](std::size_t i) {
    try {
      const auto sys = fem::assemble(mesh, model, y_samples[i]);
      const auto p1 = smallest_eigenpair(sys, opts);
      const auto p2 = second_eigenpair(sys, p1, opts);
      rep.lambda1_samples[i] = p1.lambda;
      rep.lambda2_samples[i] = p2.lambda;
    } catch (const ValidationError& e) {
      throw ValidationError("sample " + std::to_string(i) + ": " + e.what());
    } catch (const std::exception& e) {
      throw NumericalError("sample " + std::to_string(i) + ": " + e.what());
    }
  });

  double best = 2.0;
  for (std::size_t i = 0; i < y_samples.size(); ++i) {
    const double l1 = rep.lambda1_samples[i];
    const double l2 = rep.lambda2_samples[i];
    if (!(l2 > l1)) throw NumericalError("sample " + std::to_string(i) + ": lambda2 <= lambda1, gap not positive");
    const double g = 1.0 - l1 / l2;
    if (g < best) {
      best = g;
      rep.argmin_index = i;
    }
  }
  rep.gap = best;
  rep.lambda1 = rep.lambda1_samples[rep.argmin_index];
  rep.lambda2 = rep.lambda2_samples[rep.argmin_index];
  rep.y_argmin = y_samples[rep.argmin_index];
  return rep;
}

namespace {
constexpr char kMagic[8] = {'G', 'E', 'V', 'R', 'E', 'Y', 'E', 'V'};

template <class T>
void put_le(std::ostream& out, T v) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  unsigned char bytes[8];
  for (int k = 0; k < 8; ++k) bytes[k] = static_cast<unsigned char>(bits >> (8 * k));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

template <class T>
T get_le(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  std::uint64_t bits = 0;
  for (int k = 0; k < 8; ++k) bits |= std::uint64_t(bytes[k]) << (8 * k);
  T v;
  std::memcpy(&v, &bits, 8);
  return v;
}
}  // namespace

void write_eigenvector(const std::filesystem::path& path, std::span<const double> u) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out.write(kMagic, 8);
  put_le<std::uint64_t>(out, u.size());
  for (double v : u) put_le<double>(out, v);
  if (!out) throw IoError(path.string(), "write failed");
}

std::vector<double> read_eigenvector(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) throw IoError(path.string(), "not an eigenvector dump (bad magic)");
  const auto n = get_le<std::uint64_t>(in);
  std::vector<double> u(n);
  for (auto& v : u) v = get_le<double>(in);
  if (!in) throw IoError(path.string(), "truncated eigenvector dump");
  return u;
}

}  // namespace gevrey::eigensolver
