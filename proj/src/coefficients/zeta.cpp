#include "gevrey/coefficients/zeta.hpp"

#include <array>
#include <cmath>
#include <string>

#include "gevrey/common/errors.hpp"

namespace gevrey::coefficients {

double zeta(double s) {
  if (!(s > 1.0)) throw ValidationError("zeta: requires s > 1, got " + std::to_string(s));

  // Direct sum up to N-1, then the Euler-Maclaurin tail at N.
  constexpr int kTerms = 20;
  // B_{2j} / (2j)! for j = 1..8.
  constexpr std::array<double, 8> kBernoulliOverFactorial = {
      1.0 / 6.0 / 2.0,
      -1.0 / 30.0 / 24.0,
      1.0 / 42.0 / 720.0,
      -1.0 / 30.0 / 40320.0,
      5.0 / 66.0 / 3628800.0,
      -691.0 / 2730.0 / 479001600.0,
      7.0 / 6.0 / 87178291200.0,
      -3617.0 / 510.0 / 20922789888000.0,
  };

  double head = 0.0;
  for (int k = kTerms - 1; k >= 1; --k) head += std::pow(static_cast<double>(k), -s);

  const double n = kTerms;
  double tail = std::pow(n, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(n, -s);
  // rising = s (s+1) ... (s+2j-2), power = N^{-s-2j+1}
  double rising = s;
  double power = std::pow(n, -s - 1.0);
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    tail += kBernoulliOverFactorial[j] * rising * power;
    const double next = static_cast<double>(2 * j + 2);
    rising *= (s + next - 1.0) * (s + next);
    power /= n * n;
  }
  return head + tail;
}

double zeta5() {
  static const double value = zeta(5.0);
  return value;
}

}  // namespace gevrey::coefficients
