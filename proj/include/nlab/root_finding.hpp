#pragma once

#include <functional>

namespace nlab {

/// Expands [lo, lo + step] geometrically until g changes sign, bisects,
/// then polishes with Newton when dg is supplied. g(lo) must be positive
/// and g eventually negative; throws RootFindingError otherwise.
double bracketed_root(const std::function<double(double)>& g,
                      const std::function<double(double)>& dg, double lo,
                      double initial_step, double max_span, double tol);

/// Plain bisection on [lo, hi]; requires a sign change.
double bisect(const std::function<double(double)>& g, double lo, double hi,
              double tol, int max_iters = 200);

}  // namespace nlab
