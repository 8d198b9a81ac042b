#pragma once

#include <vector>

#include "nlab/fields.hpp"
#include "nlab/mesh.hpp"

namespace nlab {

struct SolverConfig {
    int coarse_count = 2048;
    int fine_count = 65536;
    double newton_tol = 1e-10;
    int max_newton_iters = 60;
    std::vector<double> continuation_steps;  // empty: generated by halving from 0.5
    double damping = 1.0;                    // initial Newton step scale in (0,1]
    double invariant_tol = 1e-8;
    double mesh_K = 0.0;                     // 0: 4 / decay_rate_estimate(instance)
};

struct SolutionProfile {
    Mesh mesh;
    std::vector<double> u;   // nodal u_eps
    std::vector<double> du;  // nodal s-derivative
    double eps = 0.0;
    ProblemInstance instance;

    // solve diagnostics
    int newton_iters = 0;
    double final_residual = 0.0;
    int continuation_count = 0;
};

struct PointValue {
    double u;
    double du;
};

struct FirstIntegralResiduals {
    double full;       // energy identity over [k*, 1], discretization-error level
    double truncated;  // |e(u(1))^2 - 2*mu0*(F(u(1))-F(theta0))|, O(eps)
};

/// Compactly supported radial test function on (0, R).
struct TestFunction {
    Fn value;
    Fn deriv;
    double support_lo = 0.0;
    double support_hi = 0.0;
};

/// Solves the rescaled layer problem on a graded mesh with damped Newton
/// iteration and continuation in eps = 1/R.
SolutionProfile solve(const ProblemInstance& instance, const SolverConfig& config = {});

struct OracleSolution {
    SolutionProfile profile;  // Richardson-extrapolated values on the coarse mesh
    double error_estimate;    // max |u_2M - u_M| / 3 over shared nodes
};

/// Uniform-mesh brute-force reference: solves at `intervals` and 2x intervals
/// and Richardson-extrapolates. Independent of the graded-mesh path.
OracleSolution oracle_solve(const ProblemInstance& instance, int intervals,
                            const SolverConfig& config = {});

/// Single uniform-mesh solve (oracle building block, exposed for order studies).
SolutionProfile solve_uniform(const ProblemInstance& instance, int intervals,
                              const SolverConfig& config = {});

/// Piecewise-cubic Hermite interpolation; exact at nodes.
PointValue evaluate(const SolutionProfile& profile, double s);

FirstIntegralResiduals first_integral_residuals(const SolutionProfile& profile);

/// Q_u[xi] = int_0^R (a xi'^2 + b f'(u) xi^2) r^(N-1) dr for xi compactly
/// supported in (0, R).
double stability_form(const SolutionProfile& profile, const TestFunction& xi);

/// Max-norm interior finite-difference residual of the profile.
double fd_residual(const SolutionProfile& profile);

}  // namespace nlab
