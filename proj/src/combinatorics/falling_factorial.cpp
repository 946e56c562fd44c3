#include "gevrey/combinatorics/falling_factorial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gevrey/common/errors.hpp"

namespace gevrey::combinatorics {

Rational ff_half(unsigned n) {
  // |(1/2)(-1/2)(-3/2)...(1/2 - n + 1)| = 1 * 3 * ... * (2n - 3) / 2^n.
  BigInt odd_product = 1;
  for (unsigned k = 1; k < n; ++k) odd_product *= 2 * k - 1;
  return Rational(odd_product, BigInt(1) << n);
}

BigInt factorial(unsigned n) {
  BigInt result = 1;
  for (unsigned k = 2; k <= n; ++k) result *= k;
  return result;
}

Rational xi(unsigned n) { return Rational(factorial(n)) / ff_half(n); }

Rational falling_factorial_sum(unsigned n, SumRange range) {
  unsigned first = 1;
  unsigned last = n;  // inclusive
  switch (range) {
    case SumRange::kInner:
      if (n == 0) return Rational(0);
      last = n - 1;
      break;
    case SumRange::kMid:
      break;
    case SumRange::kFull:
      first = 0;
      break;
  }
  Rational sum(0);
  for (unsigned i = first; i <= last && i <= n; ++i) {
    sum += Rational(binomial(n, i)) * ff_half(i) * ff_half(n - i);
  }
  return sum;
}

unsigned falling_factorial_sum_factor(SumRange range) {
  switch (range) {
    case SumRange::kInner:
      return 2;
    case SumRange::kMid:
      return 3;
    case SumRange::kFull:
      return 4;
  }
  return 0;
}

BigInt vandermonde_slice(const Multiindex& nu, unsigned r) {
  if (r > nu.order()) {
    throw ValidationError("vandermonde_slice: r = " + std::to_string(r) + " exceeds |nu| = " +
                          std::to_string(nu.order()));
  }
  BigInt sum = 0;
  for_each_below(nu, [&](const Multiindex& m) {
    if (m.order() == r) sum += binomial(nu, m);
  });
  if (sum != binomial(nu.order(), r)) {
    throw std::logic_error("Vandermonde identity violated for nu = " + nu.to_string());
  }
  return sum;
}

BoundComparison multiindex_bound_3(const Multiindex& nu) {
  BoundComparison out;
  for_each_below(nu, [&](const Multiindex& m) {
    if (m.is_zero()) return;
    out.lhs += Rational(binomial(nu, m)) * ff_half(nu.order() - m.order()) * ff_half(m.order());
  });
  out.rhs = Rational(3) * ff_half(nu.order());
  out.equal = out.lhs == out.rhs;
  return out;
}

BoundComparison multiindex_bound_8(const Multiindex& nu) {
  BoundComparison out;
  for_each_below(nu, [&](const Multiindex& m) {
    if (m.is_zero() || m == nu) return;
    const Rational outer = Rational(binomial(nu, m)) * ff_half(nu.order() - m.order());
    Rational inner(0);
    for_each_below(m, [&](const Multiindex& l) {
      inner += Rational(binomial(m, l)) * ff_half(m.order() - l.order()) * ff_half(l.order());
    });
    out.lhs += outer * inner;
  });
  out.rhs = Rational(8) * ff_half(nu.order());
  out.equal = out.lhs == out.rhs;
  return out;
}

namespace {

double ff_half_double(unsigned n) {
  double value = 1.0;
  for (unsigned k = 0; k < n; ++k) value *= std::abs(0.5 - static_cast<double>(k));
  return value;
}

double binomial_double(unsigned n, unsigned k) {
  double value = 1.0;
  for (unsigned i = 1; i <= k; ++i) value = value * static_cast<double>(n - k + i) / i;
  return value;
}

bool close(double a, double b, double rel, double scale = 0.0) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), scale});
}

}  // namespace

double sqrt_series_derivative(unsigned n, double y) {
  if (n == 0) return 0.5 * (1.0 - std::sqrt(1.0 - y));
  return 0.5 * ff_half_double(n) * std::pow(1.0 - y, 0.5 - static_cast<double>(n));
}

bool SqrtSeriesReport::all_passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const SqrtSeriesRow& r) {
    return r.bound_holds && r.closed_form_agrees && (!r.equality_expected || r.equality_holds);
  });
}

SqrtSeriesReport sqrt_series_check(unsigned n_max, std::span<const double> y_grid) {
  constexpr double kRelTol = 1e-12;
  for (double y : y_grid) {
    if (!(y >= -3.0 && y < 1.0)) {
      throw ValidationError("sqrt_series_check: grid point " + std::to_string(y) +
                            " outside [-3, 1)");
    }
  }
  SqrtSeriesReport report;
  for (double y : y_grid) {
    std::vector<double> f(n_max + 1);
    for (unsigned n = 0; n <= n_max; ++n) f[n] = sqrt_series_derivative(n, y);
    for (unsigned n = 0; n <= n_max; ++n) {
      SqrtSeriesRow row;
      row.n = n;
      row.y = y;
      row.f_derivative = f[n];
      double leibniz = 0.0;
      for (unsigned i = 0; i <= n; ++i) leibniz += binomial_double(n, i) * f[i] * f[n - i];
      row.g_derivative = leibniz;
      row.g_closed_form = n == 0 ? f[0] - 0.25 * y : (n == 1 ? f[1] - 0.25 : f[n]);
      row.bound_holds = std::abs(leibniz) <= std::abs(f[n]) * (1.0 + kRelTol);
      row.equality_expected = n >= 2;
      row.equality_holds = close(std::abs(leibniz), std::abs(f[n]), kRelTol);
      // f - y/4 cancels for n <= 1, so measure against the size of f^(n) too.
      row.closed_form_agrees = close(leibniz, row.g_closed_form, kRelTol, std::abs(f[n]) + 0.25);
      report.rows.push_back(row);
    }
  }
  return report;
}

}  // namespace gevrey::combinatorics
