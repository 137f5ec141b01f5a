#pragma once

#include <functional>
#include <span>

namespace fstest {

/// Tolerances below this are raised to it (roundoff floor of the estimator).
inline constexpr double kMinRelTol = 1e-12;

/// Adaptive Gauss-Kronrod (31-point) on [a, b]; b may be +infinity.
/// Returns the integral; `error_estimate`, when given, receives the
/// estimated absolute error.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, double* error_estimate = nullptr);

/// Integral over [breakpoints.front(), breakpoints.back()] with a panel
/// boundary at every breakpoint; the last one may be +infinity. The
/// tolerance is relative to the whole integral, not to each piece.
double integrate_piecewise(const std::function<double(double)>& f,
                           std::span<const double> breakpoints, double rel_tol = 1e-12,
                           double* error_estimate = nullptr);

}  // namespace fstest
