#pragma once

#include <functional>

namespace twotier::detail {

/// Adaptive Gauss-Legendre (20 points per panel, bisection on disagreement).
/// Returns an estimate whose absolute error is at most `abs_tol` for smooth integrands.
double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol);

} // namespace twotier::detail
