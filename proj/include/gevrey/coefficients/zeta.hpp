#pragma once

namespace gevrey::coefficients {

/// Riemann zeta for real s > 1, relative accuracy ~1e-15.
double zeta(double s);

/// zeta(5), computed once.
double zeta5();

}  // namespace gevrey::coefficients
