#include "nlab/quadrature.hpp"

#include <array>
#include <cmath>
#include <cstdlib>

#include "nlab/errors.hpp"

namespace nlab {

namespace {

double simpson(const Integrand& g, double a, double fa, double b, double fb,
               double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(const Integrand& g, double a, double fa, double b, double fb,
                   double m, double fm, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = g(lm);
    double frm = g(rm);
    double left = simpson(g, a, fa, m, fm, flm);
    double right = simpson(g, m, fm, b, fb, frm);
    double delta = left + right - whole;
    if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0) throw QuadratureError("quadrature failure: adaptive Simpson did not converge");
    return simpson_rec(g, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_rec(g, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

// 7-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 7> kGlNodes = {
    -0.9491079123427585, -0.7415311855993945, -0.4058451513773972,
    0.0,
    0.4058451513773972, 0.7415311855993945, 0.9491079123427585};
constexpr std::array<double, 7> kGlWeights = {
    0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
    0.4179591836734694,
    0.3818300505051189, 0.2797053914892766, 0.1294849661688697};

double gl7(const Integrand& g, double a, double b) {
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 7; ++i) acc += kGlWeights[i] * g(c + h * kGlNodes[i]);
    return acc * h;
}

double gauss_rec(const Integrand& g, double a, double b, double whole, double tol,
                 int depth) {
    double m = 0.5 * (a + b);
    double left = gl7(g, a, m);
    double right = gl7(g, m, b);
    double delta = left + right - whole;
    if (std::fabs(delta) <= tol) return left + right;
    if (depth <= 0) throw QuadratureError("quadrature failure: adaptive Gauss did not converge");
    return gauss_rec(g, a, m, left, 0.5 * tol, depth - 1) +
           gauss_rec(g, m, b, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const Integrand& g, double lo, double hi, double abstol,
                        int max_depth) {
    if (lo == hi) return 0.0;
    double fa = g(lo);
    double fb = g(hi);
    double m = 0.5 * (lo + hi);
    double fm = g(m);
    double whole = simpson(g, lo, fa, hi, fb, fm);
    return simpson_rec(g, lo, fa, hi, fb, m, fm, whole, abstol, max_depth);
}

double adaptive_gauss(const Integrand& g, double lo, double hi, double abstol,
                      int max_depth) {
    if (lo == hi) return 0.0;
    return gauss_rec(g, lo, hi, gl7(g, lo, hi), abstol, max_depth);
}

double adaptive_midpoint(const Integrand& g, double lo, double hi, double abstol,
                         int max_levels) {
    if (lo == hi) return 0.0;
    double width = hi - lo;
    long n = 1;
    double prev = width * g(lo + 0.5 * width);
    for (int level = 1; level <= max_levels; ++level) {
        n *= 3;  // midpoint rule triples so old nodes are reused conceptually
        double h = width / static_cast<double>(n);
        double acc = 0.0;
        for (long i = 0; i < n; ++i) acc += g(lo + (static_cast<double>(i) + 0.5) * h);
        double cur = acc * h;
        if (level >= 3 && std::fabs(cur - prev) <= abstol) return cur;
        prev = cur;
        if (n > 30000000L) break;
    }
    throw QuadratureError("quadrature failure: adaptive midpoint did not converge");
}

}  // namespace nlab
