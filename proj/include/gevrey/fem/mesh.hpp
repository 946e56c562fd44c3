#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>

#include "gevrey/coefficients/coefficient_model.hpp"
#include "gevrey/fem/sparse.hpp"

namespace gevrey::fem {

/// Uniform triangulation of [0,1]^2 with m cells per side. Every square
/// [i,i+1]x[j,j+1] is cut along the diagonal from (i,j) to (i+1,j+1).
struct Mesh {
  std::size_t m = 0;
  double h = 0.0;

  std::size_t vertex_count() const noexcept { return (m + 1) * (m + 1); }
  std::size_t triangle_count() const noexcept { return 2 * m * m; }
  std::size_t dof_count() const noexcept { return (m - 1) * (m - 1); }
  double triangle_diameter() const;

  /// Lattice indices (i, j) of the three vertices of triangle t, counter-clockwise.
  std::array<std::array<std::size_t, 2>, 3> triangle(std::size_t t) const;
  /// Interior degree of freedom of vertex (i, j), or nullopt on the boundary.
  std::optional<std::size_t> dof(std::size_t i, std::size_t j) const;
};

Mesh build_mesh(std::size_t m);

/// Generalized eigenproblem A u = lambda M u over the interior vertices.
struct SparseSystem {
  std::size_t m = 0;
  std::size_t n_dof = 0;
  CsrMatrix A;  // stiffness with a, plus b-weighted mass
  CsrMatrix M;  // c-weighted mass
};

/// P1 assembly with the three-point edge-midpoint rule on each triangle and
/// Dirichlet dofs eliminated. Rows use lexicographic interior ordering
/// (i-1) + (j-1)(m-1).
SparseSystem assemble(const Mesh& mesh, const coefficients::FrozenCoefficient& coeff);
SparseSystem assemble(const Mesh& mesh, const coefficients::CoefficientModel& model,
                      std::span<const double> y);

/// Smallest Dirichlet-Laplace eigenvalue of the unit square, 2 pi^2.
double chi1_reference();

}  // namespace gevrey::fem
