#pragma once

#include <functional>

namespace nlab {

using Integrand = std::function<double(double)>;

/// Adaptive Simpson quadrature to absolute tolerance `abstol`.
/// Evaluates the integrand at the interval endpoints.
double adaptive_simpson(const Integrand& g, double lo, double hi, double abstol,
                        int max_depth = 60);

/// Adaptive quadrature built on a 7-point Gauss-Legendre panel rule.
/// Open: never evaluates at panel endpoints, so removable endpoint
/// singularities are safe.
double adaptive_gauss(const Integrand& g, double lo, double hi, double abstol,
                      int max_depth = 60);

/// Adaptive midpoint refinement. Open rule; slow but independent of the
/// Gauss path, used as a cross-check oracle.
double adaptive_midpoint(const Integrand& g, double lo, double hi, double abstol,
                         int max_levels = 28);

}  // namespace nlab
