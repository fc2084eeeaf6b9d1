#pragma once

#include <functional>

namespace qblfq {

// Adaptive Gauss-Legendre (15-point with embedded 7-point error estimate,
// recursive bisection) to absolute tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-8);

// Integral over (0,1) with sqrt-type endpoint behavior, via x = sin^2(u).
double integrate_unit_endpoint(const std::function<double(double)>& f,
                               double abs_tol = 1e-8);

}  // namespace qblfq
