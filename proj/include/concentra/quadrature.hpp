#pragma once

#include <functional>

namespace concentra {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;   // estimated absolute error
  int evaluations = 0;
};

/// Adaptive Gauss-Kronrod (7/15) on [a, b]. Throws Error(quadrature) with the
/// achieved error estimate if the tolerance is not met within max_depth bisections.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                           double rel_tol = 0.0, int max_depth = 50);

/// Uniform-grid rule for 1-periodic f on [0, 1]. Starts at `nodes` points and
/// doubles until two successive grids agree within abs_tol.
QuadratureResult integrate_periodic(const std::function<double(double)>& f, double abs_tol, int nodes = 1 << 14,
                                    int max_nodes = 1 << 24);

/// Li(t) = integral from 2 to t of du / log u, t >= 2, relative error <= 1e-12.
double log_integral_from_2(double t);

/// li(2), the offset between li and Li.
inline constexpr double kLi2 = 1.045163780117492784844588889194613136522615578151;

/// li(t) = Li(t) + li(2).
inline double log_integral(double t) { return log_integral_from_2(t) + kLi2; }

}  // namespace concentra
