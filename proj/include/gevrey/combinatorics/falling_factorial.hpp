#pragma once

#include <span>
#include <vector>

#include "gevrey/combinatorics/multiindex.hpp"
#include "gevrey/combinatorics/rational.hpp"

namespace gevrey::combinatorics {

/// [1/2]_n = |(1/2)(1/2 - 1)...(1/2 - n + 1)|, equal to (2n-3)!!/2^n for n >= 2.
Rational ff_half(unsigned n);

/// xi_n = n! / [1/2]_n. Satisfies 1 <= xi_n <= 2 * 2^n.
Rational xi(unsigned n);

BigInt factorial(unsigned n);

/// Summation range of sum_i binom(n,i) [1/2]_i [1/2]_{n-i}.
enum class SumRange {
  kInner,  // i = 1..n-1, equals 2 [1/2]_n for n >= 2
  kMid,    // i = 1..n,   equals 3 [1/2]_n for n >= 2
  kFull,   // i = 0..n,   equals 4 [1/2]_n for n >= 2
};

Rational falling_factorial_sum(unsigned n, SumRange range);

/// The constant c with sum == c [1/2]_n for n >= 2: 2, 3 or 4.
unsigned falling_factorial_sum_factor(SumRange range);

/// sum over 0 <= m <= nu with |m| = r of binom(nu, m). Throws std::logic_error
/// if the result differs from binom(|nu|, r).
BigInt vandermonde_slice(const Multiindex& nu, unsigned r);

struct BoundComparison {
  Rational lhs;
  Rational rhs;
  bool equal = false;
};

/// lhs = sum_{0 < m <= nu} binom(nu,m) [1/2]_{|nu-m|} [1/2]_{|m|},
/// rhs = 3 [1/2]_{|nu|}. Equality holds exactly when |nu| >= 2.
BoundComparison multiindex_bound_3(const Multiindex& nu);

/// lhs = sum_{0 < m < nu} sum_{0 <= l <= m}
///         binom(nu,m) binom(m,l) [1/2]_{|nu-m|} [1/2]_{|m-l|} [1/2]_{|l|},
/// rhs = 8 [1/2]_{|nu|}.
BoundComparison multiindex_bound_8(const Multiindex& nu);

/// One row of the closed-form check of |g^(n)(y)| <= |f^(n)(y)| for
/// f(y) = (1 - sqrt(1 - y))/2 and g = f^2.
struct SqrtSeriesRow {
  unsigned n = 0;
  double y = 0.0;
  double f_derivative = 0.0;
  double g_derivative = 0.0;  // via the Leibniz rule on f * f
  double g_closed_form = 0.0; // derivative of f(y) - y/4
  bool bound_holds = false;
  bool equality_expected = false;  // n >= 2
  bool equality_holds = false;
  bool closed_form_agrees = false;
};

struct SqrtSeriesReport {
  std::vector<SqrtSeriesRow> rows;
  bool all_passed() const;
};

/// n-th derivative of f(y) = (1 - sqrt(1 - y))/2 in closed form.
double sqrt_series_derivative(unsigned n, double y);

/// Evaluates the check for n = 0..n_max at every grid point. Equalities are
/// tested with relative tolerance 1e-12. Grid points must lie in [-3, 1).
SqrtSeriesReport sqrt_series_check(unsigned n_max, std::span<const double> y_grid);

}  // namespace gevrey::combinatorics
