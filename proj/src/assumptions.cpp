#include "nlab/assumptions.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "nlab/quadrature.hpp"

namespace nlab {

namespace {

struct WorstTracker {
    bool ok = true;
    double worst = 0.0;
    double margin = std::numeric_limits<double>::infinity();

    void offend(double x, double m) {
        if (!ok && m >= margin) return;
        ok = false;
        worst = x;
        margin = m;
    }
};

AssumptionCheck make_check(const std::string& name, const WorstTracker& t,
                           const std::string& fail_detail) {
    AssumptionCheck c;
    c.name = name;
    c.passed = t.ok;
    c.worst_point = t.ok ? 0.0 : t.worst;
    c.detail = t.ok ? "ok" : fail_detail;
    return c;
}

// Relative mismatch between a supplied derivative and a centered difference.
double fd_mismatch(const Fn& value, const Fn& deriv, double x, double step) {
    double fd = (value(x + step) - value(x - step)) / (2.0 * step);
    double d = deriv(x);
    double scale = std::max({std::fabs(d), std::fabs(fd), 1.0});
    return std::fabs(d - fd) / scale;
}

}  // namespace

AssumptionReport validate_assumptions(const ProblemInstance& inst, const ProbeGrid& probe) {
    AssumptionReport report;
    const double R = inst.radius;
    const int nr = std::max(probe.r_points, 8);
    const int nu = std::max(probe.u_points, 8);
    const double fd_step = 1e-5;
    const double fd_tol = 1e-6;

    // (A1): f(theta0) = 0 and inf f' > 0 on the probe u-interval.
    {
        AssumptionCheck c;
        c.name = "A1: f(theta0) = 0";
        double f0 = inst.f(inst.f.root);
        c.passed = std::fabs(f0) <= 1e-12;
        c.worst_point = inst.f.root;
        std::ostringstream os;
        os << "f(theta0) = " << f0;
        c.detail = c.passed ? "ok" : os.str();
        report.checks.push_back(c);
    }
    {
        WorstTracker t;
        for (int i = 0; i <= nu; ++i) {
            double u = probe.u_lo + (probe.u_hi - probe.u_lo) * i / nu;
            double d = inst.f.d1(u);
            if (!(d > 0.0)) t.offend(u, d);
        }
        report.checks.push_back(make_check("A1: inf f' > 0", t, "f' not strictly positive"));
    }
    // (A2): e > 0 through the layer range [theta0, p0 + margin], where p0 is
    // bracketed by the first crossing of e(u) = sqrt(2 mu0 dF(u)). Positivity
    // beyond the attainable boundary values is not required.
    {
        AssumptionCheck c;
        c.name = "A2: e > 0";
        c.passed = false;
        double theta0 = inst.f.root;
        double span = std::max(probe.u_hi - theta0, 1.0);
        double u_cross = -1.0;
        for (int i = 0; i <= 4 * nu; ++i) {
            double u = theta0 + span * i / nu;  // scan past the probe window
            double ev = inst.e(u);
            if (!(ev > 0.0)) {
                c.worst_point = u;
                c.detail = "e vanishes before the layer equation balances";
                break;
            }
            if (i > 0 && ev <= std::sqrt(2.0 * inst.mu0 * delta_F(inst.f, u))) {
                u_cross = u;
                break;
            }
        }
        if (u_cross > 0.0) {
            c.passed = true;
            double margin = 0.25 * (u_cross - theta0);
            for (double u = u_cross; u <= u_cross + margin; u += margin / 64.0) {
                if (!(inst.e(u) > 0.0)) {
                    c.passed = false;
                    c.worst_point = u;
                    c.detail = "e not positive just past the layer range";
                    break;
                }
            }
        }
        if (c.passed) c.detail = "ok";
        report.checks.push_back(c);
    }
    {
        WorstTracker t;
        for (int i = 0; i <= nu; ++i) {
            double u = probe.u_lo + (probe.u_hi - probe.u_lo) * i / nu;
            double d = inst.e.d1(u);
            if (!(d <= 0.0)) t.offend(u, -d);
        }
        report.checks.push_back(make_check("A2: e' <= 0", t, "e not monotone decreasing"));
    }
    // (A3): a, b finite, bounded and with positive infima on [0, R].
    {
        WorstTracker t;
        for (int i = 0; i <= nr; ++i) {
            double r = R * i / nr;
            double av = inst.a(r);
            double bv = inst.b(r);
            if (!(av > 0.0)) t.offend(r, av);
            if (!(bv > 0.0)) t.offend(r, bv);
        }
        report.checks.push_back(make_check("A3: a, b positive and bounded", t,
                                           "coefficient not strictly positive"));
    }
    // (A3): b(r) r^(N-1) nondecreasing.
    {
        WorstTracker t;
        double prev = 0.0;
        for (int i = 0; i <= nr; ++i) {
            double r = R * i / nr;
            double v = inst.b(r) * std::pow(r, inst.dimension - 1);
            if (i > 0 && v < prev - 1e-12 * std::max(1.0, std::fabs(prev)))
                t.offend(r, prev - v);
            prev = v;
        }
        report.checks.push_back(
            make_check("A3: b*r^(N-1) nondecreasing", t, "b*r^(N-1) decreases"));
    }
    // (A3) band check: sup over the boundary zone [k*R, R] of
    // R(|a'|+|b'|) + R^2(|a''|+|b''|) must stay O(1); a generous fixed bound
    // stands in for the unspecified constant (a true limit is not checkable
    // numerically, and the coefficients themselves may depend on R).
    {
        const double kBandBound = 50.0;
        double sup = 0.0;
        double sup_at = inst.k_star * R;
        for (int i = 0; i <= nr; ++i) {
            double r = inst.k_star * R + (1.0 - inst.k_star) * R * i / nr;
            double v = R * (std::fabs(inst.a.d1(r)) + std::fabs(inst.b.d1(r)));
            if (inst.a.has_d2()) v += R * R * std::fabs(inst.a.d2(r));
            if (inst.b.has_d2()) v += R * R * std::fabs(inst.b.d2(r));
            if (v > sup) {
                sup = v;
                sup_at = r;
            }
        }
        AssumptionCheck c;
        c.name = "A3: boundary-zone derivative band";
        c.passed = std::isfinite(sup) && sup <= kBandBound;
        c.worst_point = sup_at;
        std::ostringstream os;
        os << "sup of R(|a'|+|b'|) + R^2(|a''|+|b''|) on [k*R, R] = " << sup;
        c.detail = os.str();
        report.checks.push_back(c);
    }
    // Supplied derivatives vs centered differences.
    {
        WorstTracker t;
        for (int i = 1; i < nr; ++i) {
            double r = R * i / nr;
            if (fd_mismatch(inst.a.value, inst.a.deriv1, r, fd_step) > fd_tol)
                t.offend(r, 0.0);
            if (fd_mismatch(inst.b.value, inst.b.deriv1, r, fd_step) > fd_tol)
                t.offend(r, 0.0);
        }
        for (int i = 1; i < nu; ++i) {
            double u = probe.u_lo + (probe.u_hi - probe.u_lo) * i / nu;
            if (fd_mismatch(inst.f.value, inst.f.deriv, u, fd_step) > fd_tol) t.offend(u, 0.0);
            if (fd_mismatch(inst.e.value, inst.e.deriv, u, fd_step) > fd_tol) t.offend(u, 0.0);
        }
        report.checks.push_back(make_check("derivative consistency", t,
                                           "supplied derivative disagrees with finite difference"));
    }
    // Instance plumbing.
    {
        AssumptionCheck c;
        c.name = "instance: mu0 > 0 and k* in (0,1)";
        c.passed = inst.mu0 > 0.0 && inst.k_star > 0.0 && inst.k_star < 1.0 &&
                   inst.dimension >= 2;
        c.detail = c.passed ? "ok" : "invalid mu0/k*/N";
        report.checks.push_back(c);
    }
    return report;
}

double delta_F(const Reaction& f, double t) {
    if (!std::isfinite(t)) throw DomainError("delta_F: t must be finite");
    if (t == f.root) return 0.0;
    auto g = [&f](double s) { return f(s); };
    return adaptive_simpson(g, f.root, t, 1e-12);
}

double ratio_at_boundary(const ProblemInstance& inst) {
    double aR = inst.a(inst.radius);
    if (aR == 0.0) throw DomainError("degenerate coefficient: a(R) = 0");
    return inst.b(inst.radius) / aR;
}

}  // namespace nlab
