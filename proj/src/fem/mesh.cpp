#include "gevrey/fem/mesh.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gevrey/common/errors.hpp"

namespace gevrey::fem {

double Mesh::triangle_diameter() const { return h * std::numbers::sqrt2; }

std::array<std::array<std::size_t, 2>, 3> Mesh::triangle(std::size_t t) const {
  const std::size_t cell = t / 2;
  const std::size_t i = cell % m;
  const std::size_t j = cell / m;
  if (t % 2 == 0) return {{{i, j}, {i + 1, j}, {i + 1, j + 1}}};
  return {{{i, j}, {i + 1, j + 1}, {i, j + 1}}};
}

std::optional<std::size_t> Mesh::dof(std::size_t i, std::size_t j) const {
  if (i == 0 || j == 0 || i >= m || j >= m) return std::nullopt;
  return (i - 1) + (j - 1) * (m - 1);
}

Mesh build_mesh(std::size_t m) {
  if (m < 2) throw ValidationError("build_mesh: need m >= 2 cells per side, got " + std::to_string(m));
  return Mesh{m, 1.0 / static_cast<double>(m)};
}

namespace {

// 7-point pattern of the fixed-diagonal mesh, columns sorted.
void build_pattern(const Mesh& mesh, CsrMatrix& a) {
  const std::size_t n1 = mesh.m - 1;
  const std::size_t n = n1 * n1;
  a.n = n;
  a.row_ptr.assign(n + 1, 0);
  a.col.clear();
  a.col.reserve(7 * n);
  const long offsets[7][2] = {{-1, -1}, {0, -1}, {-1, 0}, {0, 0}, {1, 0}, {0, 1}, {1, 1}};
  for (std::size_t j = 1; j <= n1; ++j)
    for (std::size_t i = 1; i <= n1; ++i) {
      for (const auto& o : offsets) {
        const long ii = static_cast<long>(i) + o[0];
        const long jj = static_cast<long>(j) + o[1];
        if (ii < 1 || jj < 1 || ii > static_cast<long>(n1) || jj > static_cast<long>(n1)) continue;
        a.col.push_back(*mesh.dof(static_cast<std::size_t>(ii), static_cast<std::size_t>(jj)));
      }
      a.row_ptr[*mesh.dof(i, j) + 1] = a.col.size();
    }
  a.val.assign(a.col.size(), 0.0);
}

}  // namespace

SparseSystem assemble(const Mesh& mesh, const coefficients::FrozenCoefficient& coeff) {
  if (mesh.m < 2) throw ValidationError("assemble: mesh needs m >= 2");
  SparseSystem sys;
  sys.m = mesh.m;
  sys.n_dof = mesh.dof_count();
  build_pattern(mesh, sys.A);
  sys.M = sys.A;

  const double h = mesh.h;
  const double area = 0.5 * h * h;
  const double w = area / 3.0;
  const std::size_t edges[3][2] = {{0, 1}, {1, 2}, {2, 0}};

  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto v = mesh.triangle(t);
    double px[3], py[3];
    std::optional<std::size_t> d[3];
    for (int k = 0; k < 3; ++k) {
      px[k] = static_cast<double>(v[k][0]) * h;
      py[k] = static_cast<double>(v[k][1]) * h;
      d[k] = mesh.dof(v[k][0], v[k][1]);
    }
    if (!d[0] && !d[1] && !d[2]) continue;

    double gx[3], gy[3];
    for (int k = 0; k < 3; ++k) {
      const int k1 = (k + 1) % 3, k2 = (k + 2) % 3;
      gx[k] = (py[k1] - py[k2]) / (2.0 * area);
      gy[k] = (px[k2] - px[k1]) / (2.0 * area);
    }

    // Edge-midpoint samples; both end vertices have basis value 1/2 there.
    double a_sum = 0.0;
    double b_edge[3], c_edge[3];
    for (int e = 0; e < 3; ++e) {
      const double qx = 0.5 * (px[edges[e][0]] + px[edges[e][1]]);
      const double qy = 0.5 * (py[edges[e][0]] + py[edges[e][1]]);
      a_sum += coeff.a(qx, qy);
      b_edge[e] = coeff.b();
      c_edge[e] = coeff.c();
    }

    double stiff[3][3], mass_b[3][3], mass_c[3][3];
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) {
        stiff[p][q] = w * a_sum * (gx[p] * gx[q] + gy[p] * gy[q]);
        mass_b[p][q] = 0.0;
        mass_c[p][q] = 0.0;
      }
    for (int e = 0; e < 3; ++e) {
      const std::size_t p = edges[e][0], q = edges[e][1];
      const double mb = 0.25 * w * b_edge[e];
      const double mc = 0.25 * w * c_edge[e];
      mass_b[p][p] += mb;
      mass_b[q][q] += mb;
      mass_b[p][q] += mb;
      mass_b[q][p] += mb;
      mass_c[p][p] += mc;
      mass_c[q][q] += mc;
      mass_c[p][q] += mc;
      mass_c[q][p] += mc;
    }

    for (int p = 0; p < 3; ++p) {
      if (!d[p]) continue;
      for (int q = 0; q < 3; ++q) {
        if (!d[q]) continue;
        const std::size_t s = sys.A.slot(*d[p], *d[q]);
        sys.A.val[s] += stiff[p][q] + mass_b[p][q];
        sys.M.val[s] += mass_c[p][q];
      }
    }
  }
  return sys;
}

SparseSystem assemble(const Mesh& mesh, const coefficients::CoefficientModel& model,
                      std::span<const double> y) {
  return assemble(mesh, model.freeze(y));
}

double chi1_reference() { return 2.0 * std::numbers::pi * std::numbers::pi; }

}  // namespace gevrey::fem
