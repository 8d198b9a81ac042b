#include "nlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nlab/assumptions.hpp"
#include "nlab/asymptotics.hpp"
#include "nlab/quadrature.hpp"

namespace nlab {

namespace {

// Finite-difference discretization of the rescaled layer equation on a
// fixed mesh at a fixed eps. Coefficients are sampled once per assembly.
struct Discretization {
    const Mesh& mesh;
    const ProblemInstance& inst;
    double eps;
    int M;                        // last node index
    std::vector<double> s;
    std::vector<double> drift;    // (N-1)/s + da/(a) scaled, per node (interior)
    std::vector<double> q;        // (beta/alpha)(s)
    double d0, d1, d2;            // one-sided derivative weights at s = 1

    Discretization(const Mesh& mesh_, const ProblemInstance& inst_, double eps_)
        : mesh(mesh_), inst(inst_), eps(eps_) {
        M = mesh.size() - 1;
        s = mesh.nodes;
        double Rp = 1.0 / eps;
        drift.resize(M + 1, 0.0);
        q.resize(M + 1, 0.0);
        for (int i = 0; i <= M; ++i) {
            double r = s[i] * Rp;
            double av = inst.a(r);
            double bv = inst.b(r);
            q[i] = bv / av;
            if (i > 0) {
                double dalpha = Rp * inst.a.d1(r);
                drift[i] = (inst.dimension - 1) / s[i] + dalpha / av;
            }
        }
        double x0 = s[M - 2], x1 = s[M - 1], x2 = s[M];
        d0 = (x2 - x1) / ((x0 - x1) * (x0 - x2));
        d1 = (x2 - x0) / ((x1 - x0) * (x1 - x2));
        d2 = (2.0 * x2 - x0 - x1) / ((x2 - x0) * (x2 - x1));
    }

    // Nonuniform three-point weights around node i.
    void stencil(int i, double w1[3], double w2[3]) const {
        double hm = s[i] - s[i - 1];
        double hp = s[i + 1] - s[i];
        w1[0] = -hp / (hm * (hm + hp));
        w1[1] = (hp - hm) / (hm * hp);
        w1[2] = hm / (hp * (hm + hp));
        w2[0] = 2.0 / (hm * (hm + hp));
        w2[1] = -2.0 / (hm * hp);
        w2[2] = 2.0 / (hp * (hm + hp));
    }

    void residual(const std::vector<double>& u, std::vector<double>& F) const {
        F.resize(M + 1);
        double e2 = eps * eps;
        // Origin row: symmetry turns the radial drift into an extra Laplacian
        // share, eps^2 * N * u''(0) = q(0) f(u(0)).
        double h0 = s[1] - s[0];
        F[0] = e2 * inst.dimension * 2.0 * (u[1] - u[0]) / (h0 * h0) - q[0] * inst.f(u[0]);
        for (int i = 1; i < M; ++i) {
            double w1[3], w2[3];
            stencil(i, w1, w2);
            double lap = w2[0] * u[i - 1] + w2[1] * u[i] + w2[2] * u[i + 1];
            double grad = w1[0] * u[i - 1] + w1[1] * u[i] + w1[2] * u[i + 1];
            F[i] = e2 * (lap + drift[i] * grad) - q[i] * inst.f(u[i]);
        }
        double du1 = d0 * u[M - 2] + d1 * u[M - 1] + d2 * u[M];
        F[M] = eps * du1 - inst.e(u[M]);
    }

    void jacobian(const std::vector<double>& u, std::vector<double>& lower,
                  std::vector<double>& diag, std::vector<double>& upper,
                  double& extra) const {
        lower.assign(M + 1, 0.0);
        diag.assign(M + 1, 0.0);
        upper.assign(M + 1, 0.0);
        double e2 = eps * eps;
        double h0 = s[1] - s[0];
        diag[0] = -e2 * inst.dimension * 2.0 / (h0 * h0) - q[0] * inst.f.d1(u[0]);
        upper[0] = e2 * inst.dimension * 2.0 / (h0 * h0);
        for (int i = 1; i < M; ++i) {
            double w1[3], w2[3];
            stencil(i, w1, w2);
            lower[i] = e2 * (w2[0] + drift[i] * w1[0]);
            diag[i] = e2 * (w2[1] + drift[i] * w1[1]) - q[i] * inst.f.d1(u[i]);
            upper[i] = e2 * (w2[2] + drift[i] * w1[2]);
        }
        extra = eps * d0;
        lower[M] = eps * d1;
        diag[M] = eps * d2 - inst.e.d1(u[M]);
    }

    // Residual norm in units of u: each row divided by its diagonal scale,
    // so the tolerance is meaningful independently of eps^2/h^2 row scaling.
    double scaled_norm(const std::vector<double>& u, const std::vector<double>& F) const {
        double e2 = eps * eps;
        double h0 = s[1] - s[0];
        double norm = std::fabs(F[0]) /
                      (e2 * inst.dimension * 2.0 / (h0 * h0) + std::fabs(q[0] * inst.f.d1(u[0])) + 1.0);
        for (int i = 1; i < M; ++i) {
            double w1[3], w2[3];
            stencil(i, w1, w2);
            double scale = e2 * (std::fabs(w2[1]) + std::fabs(drift[i] * w1[1])) +
                           std::fabs(q[i] * inst.f.d1(u[i])) + 1.0;
            norm = std::max(norm, std::fabs(F[i]) / scale);
        }
        double scaleM = eps * std::fabs(d2) + std::fabs(inst.e.d1(u[M])) + 1.0;
        return std::max(norm, std::fabs(F[M]) / scaleM);
    }
};

// Tridiagonal solve with one extra entry in the last row (column M-2).
void solve_almost_tridiagonal(const std::vector<double>& lower, std::vector<double> diag,
                              const std::vector<double>& upper, double extra,
                              std::vector<double> rhs, std::vector<double>& x) {
    int M = static_cast<int>(diag.size()) - 1;
    std::vector<double> c(M, 0.0), d(M, 0.0);
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for (int i = 1; i < M; ++i) {
        double m = diag[i] - lower[i] * c[i - 1];
        c[i] = upper[i] / m;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
    }
    double b_tilde = lower[M] - extra * c[M - 2];
    double rhs_tilde = rhs[M] - extra * d[M - 2];
    double c_hat = diag[M] - b_tilde * c[M - 1];
    double d_hat = rhs_tilde - b_tilde * d[M - 1];
    x.resize(M + 1);
    x[M] = d_hat / c_hat;
    for (int i = M - 1; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

// Damped Newton iteration; returns the final residual norm.
double newton_solve(const Discretization& disc, std::vector<double>& u, double tol,
                    int max_iters, double damping, int& iters_out) {
    std::vector<double> F, lower, diag, upper, step, trial, Ftrial;
    double extra = 0.0;
    disc.residual(u, F);
    double norm = disc.scaled_norm(u, F);
    int it = 0;
    for (; it < max_iters && norm > tol; ++it) {
        disc.jacobian(u, lower, diag, upper, extra);
        std::vector<double> rhs(F.size());
        for (size_t i = 0; i < F.size(); ++i) rhs[i] = -F[i];
        solve_almost_tridiagonal(lower, diag, upper, extra, rhs, step);
        double lambda = damping;
        double best = std::numeric_limits<double>::infinity();
        trial.resize(u.size());
        bool accepted = false;
        for (int halvings = 0; halvings <= 20; ++halvings) {
            for (size_t i = 0; i < u.size(); ++i) trial[i] = u[i] + lambda * step[i];
            disc.residual(trial, Ftrial);
            double n = disc.scaled_norm(trial, Ftrial);
            if (std::isfinite(n) && n < norm) {
                u = trial;
                F = Ftrial;
                norm = n;
                accepted = true;
                break;
            }
            best = std::min(best, n);
            lambda *= 0.5;
        }
        if (!accepted) break;  // stagnated; caller decides
    }
    iters_out = it;
    return norm;
}

std::vector<double> continuation_sequence(double target, const SolverConfig& cfg) {
    if (!cfg.continuation_steps.empty()) {
        auto seq = cfg.continuation_steps;
        if (seq.back() != target) seq.push_back(target);
        return seq;
    }
    std::vector<double> seq;
    double e = 0.5;
    while (e > target * 1.0000001) {
        seq.push_back(e);
        e *= 0.5;
    }
    seq.push_back(target);
    return seq;
}

std::vector<double> layer_ansatz(const Mesh& mesh, const ProblemInstance& inst, double eps,
                                 double p0, double rate) {
    std::vector<double> u(mesh.nodes.size());
    double theta0 = inst.f.root;
    for (size_t i = 0; i < u.size(); ++i) {
        double t = (1.0 - mesh.nodes[i]) * rate / eps;
        u[i] = theta0 + (p0 - theta0) * std::exp(-t);
    }
    return u;
}

std::vector<double> interp_linear(const std::vector<double>& xs_old,
                                  const std::vector<double>& u_old,
                                  const std::vector<double>& xs_new) {
    std::vector<double> out(xs_new.size());
    size_t j = 0;
    for (size_t i = 0; i < xs_new.size(); ++i) {
        double x = xs_new[i];
        while (j + 2 < xs_old.size() && xs_old[j + 1] < x) ++j;
        double x0 = xs_old[j], x1 = xs_old[j + 1];
        double t = (x - x0) / (x1 - x0);
        out[i] = (1.0 - t) * u_old[j] + t * u_old[j + 1];
    }
    return out;
}

std::vector<double> nodal_derivative(const Mesh& mesh, const std::vector<double>& u) {
    int M = mesh.size() - 1;
    const auto& s = mesh.nodes;
    std::vector<double> du(M + 1);
    du[0] = 0.0;  // symmetry condition at the origin
    for (int i = 1; i < M; ++i) {
        double hm = s[i] - s[i - 1];
        double hp = s[i + 1] - s[i];
        du[i] = (-hp / (hm * (hm + hp))) * u[i - 1] + ((hp - hm) / (hm * hp)) * u[i] +
                (hm / (hp * (hm + hp))) * u[i + 1];
    }
    double x0 = s[M - 2], x1 = s[M - 1], x2 = s[M];
    du[M] = u[M - 2] * (x2 - x1) / ((x0 - x1) * (x0 - x2)) +
            u[M - 1] * (x2 - x0) / ((x1 - x0) * (x1 - x2)) +
            u[M] * (2.0 * x2 - x0 - x1) / ((x2 - x0) * (x2 - x1));
    return du;
}

void check_profile_invariants(const SolutionProfile& p, double tol) {
    const double theta0 = p.instance.f.root;
    const auto& s = p.mesh.nodes;
    double Rp = 1.0 / p.eps;
    double prev_u = -std::numeric_limits<double>::infinity();
    double prev_flux = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < p.u.size(); ++i) {
        if (p.u[i] < theta0 - tol)
            throw SolverError("solution rejected: u dips below theta0");
        if (p.u[i] < prev_u - tol)
            throw SolverError("solution rejected: u not nondecreasing");
        prev_u = std::max(prev_u, p.u[i]);
        double flux = std::pow(s[i], p.instance.dimension - 1) *
                      p.instance.a(s[i] * Rp) * p.du[i];
        if (flux < prev_flux - tol * std::max(1.0, std::fabs(prev_flux)))
            throw SolverError("solution rejected: s^(N-1)*a*du not nondecreasing");
        prev_flux = std::max(prev_flux, flux);
    }
    double bc = std::fabs(p.eps * p.du.back() - p.instance.e(p.u.back()));
    if (bc > tol) throw SolverError("solution rejected: boundary residual too large");
}

SolutionProfile solve_impl(const ProblemInstance& inst, const SolverConfig& cfg,
                           bool uniform, int uniform_intervals, bool strict_checks) {
    const double target = 1.0 / inst.radius;
    if (target > 0.5)
        throw DomainError("solve: eps = 1/R must be <= 0.5 (perturbative regime)");

    double p0 = solve_p0(inst.f, inst.e, inst.mu0);
    double rate = std::sqrt(inst.mu0 * inst.f.d1(p0));
    double K = cfg.mesh_K > 0.0 ? cfg.mesh_K : 4.0 / decay_rate_estimate(inst);

    auto seq = continuation_sequence(target, cfg);
    std::vector<double> u;
    Mesh mesh;
    Mesh prev_mesh;
    int total_iters = 0;
    double last_norm = 0.0;
    for (size_t k = 0; k < seq.size(); ++k) {
        double eps = seq[k];
        Mesh next = uniform ? make_uniform_mesh(uniform_intervals)
                            : make_layer_mesh(eps, cfg.coarse_count, cfg.fine_count, K);
        std::vector<double> u0;
        if (k == 0) {
            u0 = layer_ansatz(next, inst, eps, p0, rate);
        } else if (uniform) {
            u0 = u;  // same node set
        } else {
            u0 = interp_linear(prev_mesh.nodes, u, next.nodes);
        }
        Discretization disc(next, inst, eps);
        int iters = 0;
        last_norm = newton_solve(disc, u0, cfg.newton_tol, cfg.max_newton_iters,
                                 cfg.damping, iters);
        total_iters += iters;
        bool last_step = (k + 1 == seq.size());
        if (last_step && last_norm > cfg.newton_tol) {
            std::ostringstream os;
            os << "nonconvergence: Newton residual " << last_norm << " at eps = " << eps;
            throw SolverError(os.str());
        }
        u = std::move(u0);
        prev_mesh = next;
        mesh = std::move(next);
    }

    SolutionProfile profile;
    profile.mesh = std::move(mesh);
    profile.du = nodal_derivative(profile.mesh, u);
    profile.u = std::move(u);
    profile.eps = target;
    profile.instance = inst;
    profile.newton_iters = total_iters;
    profile.final_residual = last_norm;
    profile.continuation_count = static_cast<int>(seq.size());
    if (strict_checks) check_profile_invariants(profile, cfg.invariant_tol);
    return profile;
}

}  // namespace

SolutionProfile solve(const ProblemInstance& inst, const SolverConfig& cfg) {
    return solve_impl(inst, cfg, /*uniform=*/false, 0, /*strict_checks=*/true);
}

SolutionProfile solve_uniform(const ProblemInstance& inst, int intervals,
                              const SolverConfig& cfg) {
    return solve_impl(inst, cfg, /*uniform=*/true, intervals, /*strict_checks=*/false);
}

OracleSolution oracle_solve(const ProblemInstance& inst, int intervals,
                            const SolverConfig& cfg) {
    if (intervals < 2) throw DomainError("oracle_solve: refinement too small");
    SolutionProfile coarse = solve_uniform(inst, intervals, cfg);
    SolutionProfile fine = solve_uniform(inst, 2 * intervals, cfg);

    OracleSolution out;
    out.profile = coarse;
    double worst = 0.0;
    for (int i = 0; i <= intervals; ++i) {
        double uc = coarse.u[i];
        double uf = fine.u[2 * i];
        worst = std::max(worst, std::fabs(uf - uc));
        out.profile.u[i] = (4.0 * uf - uc) / 3.0;
        out.profile.du[i] = (4.0 * fine.du[2 * i] - coarse.du[i]) / 3.0;
    }
    out.error_estimate = worst / 3.0;
    return out;
}

PointValue evaluate(const SolutionProfile& p, double s) {
    if (s < 0.0 || s > 1.0) throw DomainError("evaluate: s out of domain [0,1]");
    const auto& xs = p.mesh.nodes;
    auto it = std::upper_bound(xs.begin(), xs.end(), s);
    int i = static_cast<int>(it - xs.begin()) - 1;
    i = std::clamp(i, 0, p.mesh.size() - 2);
    double h = xs[i + 1] - xs[i];
    double t = (s - xs[i]) / h;
    double u0 = p.u[i], u1 = p.u[i + 1], m0 = p.du[i] * h, m1 = p.du[i + 1] * h;
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    double val = h00 * u0 + h10 * m0 + h01 * u1 + h11 * m1;
    double dh00 = 6 * t2 - 6 * t, dh10 = 3 * t2 - 4 * t + 1;
    double dh01 = -6 * t2 + 6 * t, dh11 = 3 * t2 - 2 * t;
    double dval = (dh00 * u0 + dh10 * m0 + dh01 * u1 + dh11 * m1) / h;
    return {val, dval};
}

FirstIntegralResiduals first_integral_residuals(const SolutionProfile& p) {
    const ProblemInstance& inst = p.instance;
    const double R = inst.radius;
    const double eps = p.eps;
    const double kstar = inst.k_star;
    const auto& s = p.mesh.nodes;
    const int M = p.mesh.size() - 1;

    auto ratio = [&](double si) {
        double r = si * R;
        return inst.b(r) / inst.a(r);
    };
    auto dratio = [&](double si) {
        double r = si * R;
        double av = inst.a(r), bv = inst.b(r);
        return R * (inst.b.d1(r) * av - bv * inst.a.d1(r)) / (av * av);
    };
    auto integrand = [&](double si, double ui, double dui) {
        double r = si * R;
        double av = inst.a(r);
        double drift = (inst.dimension - 1) / si + R * inst.a.d1(r) / av;
        return eps * eps * drift * dui * dui + delta_F(inst.f, ui) * dratio(si);
    };

    // Trapezoid over mesh nodes in [k*, 1], plus the partial leading cell.
    int j = 0;
    while (j < M && s[j] < kstar) ++j;
    double integral = 0.0;
    PointValue at_k = evaluate(p, kstar);
    if (s[j] > kstar) {
        double g0 = integrand(kstar, at_k.u, at_k.du);
        double g1 = integrand(s[j], p.u[j], p.du[j]);
        integral += 0.5 * (g0 + g1) * (s[j] - kstar);
    }
    double gprev = integrand(s[j], p.u[j], p.du[j]);
    for (int i = j + 1; i <= M; ++i) {
        double gi = integrand(s[i], p.u[i], p.du[i]);
        integral += 0.5 * (gprev + gi) * (s[i] - s[i - 1]);
        gprev = gi;
    }

    double C = 0.5 * eps * eps * at_k.du * at_k.du - ratio(kstar) * delta_F(inst.f, at_k.u);
    double eu1 = inst.e(p.u[M]);
    double dF1 = delta_F(inst.f, p.u[M]);
    double lhs = -0.5 * eu1 * eu1 + ratio(1.0) * dF1;
    double rhs = integral - C;

    FirstIntegralResiduals out;
    out.full = std::fabs(lhs - rhs);
    out.truncated = std::fabs(eu1 * eu1 - 2.0 * inst.mu0 * dF1);
    return out;
}

double stability_form(const SolutionProfile& p, const TestFunction& xi) {
    const double R = p.instance.radius;
    if (!(xi.support_lo > 0.0 && xi.support_hi < R && xi.support_lo < xi.support_hi))
        throw DomainError("inadmissible test function: support must lie strictly inside (0,R)");
    auto g = [&](double r) {
        double xv = xi.value(r);
        double xd = xi.deriv(r);
        double uv = evaluate(p, r / R).u;
        double w = std::pow(r, p.instance.dimension - 1);
        return (p.instance.a(r) * xd * xd + p.instance.b(r) * p.instance.f.d1(uv) * xv * xv) * w;
    };
    return adaptive_simpson(g, xi.support_lo, xi.support_hi, 1e-12);
}

double fd_residual(const SolutionProfile& p) {
    Discretization disc(p.mesh, p.instance, p.eps);
    std::vector<double> F;
    disc.residual(p.u, F);
    double m = 0.0;
    for (size_t i = 0; i + 1 < F.size(); ++i) m = std::max(m, std::fabs(F[i]));
    return m;
}

}  // namespace nlab
