#pragma once

#include <functional>

namespace phm::detail {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = true;
};

/// Adaptive Gauss-Kronrod (7/15) on [a, b]. Subdivides by bisection until
/// the Kronrod/Gauss difference is below max(abs_tol, rel_tol * |value|)
/// on every panel, or `max_evaluations` integrand calls are spent.
QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b,
                                double rel_tol, double abs_tol, int max_evaluations);

}  // namespace phm::detail
