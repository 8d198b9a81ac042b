#include "nlab/root_finding.hpp"

#include <cmath>

#include "nlab/errors.hpp"

namespace nlab {

double bisect(const std::function<double(double)>& g, double lo, double hi, double tol,
              int max_iters) {
    double flo = g(lo);
    double fhi = g(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw RootFindingError("bisect: no sign change on bracket");
    for (int i = 0; i < max_iters && hi - lo > tol; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = g(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

double bracketed_root(const std::function<double(double)>& g,
                      const std::function<double(double)>& dg, double lo,
                      double initial_step, double max_span, double tol) {
    double a = lo;
    double fa = g(a);
    if (fa == 0.0) return a;
    if (fa < 0.0) throw RootFindingError("root bracketing failure: g(lo) not positive");
    double step = initial_step;
    double b = a + step;
    double fb = g(b);
    while (fb > 0.0) {
        a = b;
        fa = fb;
        step *= 2.0;
        b = a + step;
        if (b - lo > max_span)
            throw RootFindingError("root bracketing failure: no sign change within span");
        fb = g(b);
    }
    double root = bisect(g, a, b, std::max(tol, 1e-15 * std::fabs(b)));
    if (dg) {
        for (int i = 0; i < 8; ++i) {
            double f = g(root);
            double d = dg(root);
            if (d == 0.0 || !std::isfinite(d)) break;
            double next = root - f / d;
            if (!(next > a && next < b)) break;
            if (std::fabs(next - root) <= tol * 0.01) {
                root = next;
                break;
            }
            root = next;
        }
    }
    return root;
}

}  // namespace nlab
