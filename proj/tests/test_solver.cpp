#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nlab/assumptions.hpp"
#include "nlab/asymptotics.hpp"
#include "nlab/families.hpp"
#include "nlab/solver.hpp"

using namespace nlab;

namespace {

FamilyParams base_params() {
    FamilyParams p;
    p.N = 2;
    p.alpha1 = 1.0;
    p.beta1 = 1.0;
    p.k_star = 0.5;
    p.reaction = {"linear", 0.0, 1.0, 0.0};
    p.flux = {"constant", 1.0, 0.0};
    return p;
}

ProblemInstance linear_constant(double R) {
    return make_family("constant", base_params()).instance(R);
}

// Sup over mesh nodes in [k*, 1] of the pointwise first-integral defect.
double pointwise_defect(const SolutionProfile& p) {
    double sup = 0.0;
    for (int i = 0; i < p.mesh.size(); ++i) {
        double s = p.mesh.nodes[i];
        if (s < p.instance.k_star) continue;
        double r = s * p.instance.radius;
        double q = p.instance.b(r) / p.instance.a(r);
        double rhs = std::sqrt(2.0 * q * std::max(0.0, delta_F(p.instance.f, p.u[i])));
        sup = std::max(sup, std::fabs(p.eps * p.du[i] - rhs));
    }
    return sup;
}

}  // namespace

TEST_CASE("layer mesh construction") {
    Mesh m = make_layer_mesh(0.01, 100, 400, 4.0);
    double sigma = std::min(0.5, 4.0 * 0.01 * std::log(100.0));
    CHECK(m.layer_width == doctest::Approx(sigma));
    CHECK(m.size() == 501);
    CHECK(m.nodes.front() == 0.0);
    CHECK(m.nodes.back() == 1.0);
    for (int i = 1; i < m.size(); ++i) CHECK(m.nodes[i] > m.nodes[i - 1]);
    // fine spacing inside the layer is sigma/400
    CHECK(m.nodes[101] - m.nodes[100] == doctest::Approx(sigma / 400.0));

    Mesh u = make_uniform_mesh(64);
    CHECK(u.size() == 65);
    CHECK(u.nodes[32] == doctest::Approx(0.5));
}

TEST_CASE("decay rate estimate") {
    // a == b == 1, f' == 1: C1 = 1/2, C3 = 1, rate = sqrt(1/2)/4.
    CHECK(decay_rate_estimate(linear_constant(50.0)) ==
          doctest::Approx(std::sqrt(0.5) / 4.0).epsilon(1e-12));
}

TEST_CASE("solve: linear-constant boundary values and invariants") {
    SolutionProfile p = solve(linear_constant(100.0));
    CHECK(p.eps == doctest::Approx(0.01));
    CHECK(p.final_residual <= 1e-10);

    // boundary condition holds to solver accuracy
    CHECK(p.eps * p.du.back() == doctest::Approx(p.instance.e(p.u.back())).epsilon(1e-9));
    // flat core at theta0, monotone profile
    CHECK(p.u.front() == doctest::Approx(0.0).epsilon(1e-12));
    for (size_t i = 1; i < p.u.size(); ++i) CHECK(p.u[i] >= p.u[i - 1] - 1e-12);
    // boundary value near the two-term prediction
    CHECK(p.u.back() == doctest::Approx(1.005).epsilon(1e-4));
    CHECK(fd_residual(p) <= 1e-7);
}

TEST_CASE("solve rejects radii below the continuation start") {
    CHECK_THROWS_AS(solve(linear_constant(1.5)), DomainError);
}

TEST_CASE("evaluate: exact at nodes, smooth between, domain-checked") {
    SolutionProfile p = solve(linear_constant(50.0));
    for (int i : {0, 17, p.mesh.size() / 2, p.mesh.size() - 1}) {
        PointValue v = evaluate(p, p.mesh.nodes[i]);
        CHECK(v.u == doctest::Approx(p.u[i]).epsilon(1e-14));
        CHECK(v.du == doctest::Approx(p.du[i]).epsilon(1e-14));
    }
    int j = p.mesh.size() - 10;
    double mid = 0.5 * (p.mesh.nodes[j] + p.mesh.nodes[j + 1]);
    PointValue v = evaluate(p, mid);
    CHECK(v.u >= std::min(p.u[j], p.u[j + 1]) - 1e-12);
    CHECK(v.u <= std::max(p.u[j], p.u[j + 1]) + 1e-12);

    CHECK_THROWS_AS(evaluate(p, -0.01), DomainError);
    CHECK_THROWS_AS(evaluate(p, 1.01), DomainError);
}

TEST_CASE("first integral residuals") {
    SolutionProfile p50 = solve(linear_constant(50.0));
    SolutionProfile p200 = solve(linear_constant(200.0));
    FirstIntegralResiduals r50 = first_integral_residuals(p50);
    FirstIntegralResiduals r200 = first_integral_residuals(p200);

    CHECK(r50.full <= 1e-6);
    CHECK(r200.full <= 1e-6);
    // truncated residual is O(eps): quarters (roughly) from R=50 to R=200
    CHECK(r200.truncated < 0.35 * r50.truncated);
    CHECK(r200.truncated > 0.15 * r50.truncated);
}

TEST_CASE("pointwise first-integral defect shrinks with eps") {
    double d50 = pointwise_defect(solve(linear_constant(50.0)));
    double d200 = pointwise_defect(solve(linear_constant(200.0)));
    CHECK(d50 < 0.1);
    CHECK(d200 < 0.75 * d50);  // at least the sqrt(eps) rate
}

TEST_CASE("uniform solves converge at second order") {
    ProblemInstance inst = linear_constant(20.0);
    double u1 = solve_uniform(inst, 2000).u.back();
    double u2 = solve_uniform(inst, 4000).u.back();
    double u3 = solve_uniform(inst, 8000).u.back();
    double order = std::log2(std::fabs(u1 - u2) / std::fabs(u2 - u3));
    CHECK(order == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("oracle agrees with the graded-mesh solve") {
    ProblemInstance inst = linear_constant(50.0);
    SolutionProfile graded = solve(inst);
    OracleSolution oracle = oracle_solve(inst, 16384);
    CHECK(oracle.error_estimate < 1e-6);
    for (double s : {0.5, 0.9, 1.0}) {
        double ug = evaluate(graded, s).u;
        double uo = evaluate(oracle.profile, s).u;
        CHECK(ug == doctest::Approx(uo).epsilon(2e-6));
    }
}

TEST_CASE("stability form") {
    SolutionProfile p = solve(linear_constant(50.0));

    // smooth bump supported on (10, 20)
    auto bump = [](double r) {
        double x = (r - 15.0) / 5.0;
        if (std::fabs(x) >= 1.0) return 0.0;
        return std::exp(-1.0 / (1.0 - x * x));
    };
    auto dbump = [](double r) {
        double x = (r - 15.0) / 5.0;
        if (std::fabs(x) >= 1.0) return 0.0;
        double y = 1.0 - x * x;
        return std::exp(-1.0 / y) * (-2.0 * x / (y * y)) / 5.0;
    };
    TestFunction xi{bump, dbump, 10.0, 20.0};
    // b f'(u) > 0 makes the form strictly positive here
    CHECK(stability_form(p, xi) > 0.0);

    TestFunction bad{bump, dbump, -1.0, 20.0};
    CHECK_THROWS_AS(stability_form(p, bad), DomainError);
    TestFunction bad2{bump, dbump, 10.0, 50.0};
    CHECK_THROWS_AS(stability_form(p, bad2), DomainError);
}

TEST_CASE("variable-coefficient families solve cleanly") {
    FamilyParams p = base_params();
    p.N = 3;
    p.flux = {"linear", 2.0, 1.0};
    for (const char* name : {"ramp", "inconspicuous"}) {
        ProblemInstance inst = make_family(name, p).instance(60.0);
        SolutionProfile prof = solve(inst);
        CHECK(prof.final_residual <= 1e-10);
        CHECK(prof.eps * prof.du.back() ==
              doctest::Approx(inst.e(prof.u.back())).epsilon(1e-9));
        LayerConstants lc = compute_constants(inst);
        CHECK(prof.u.back() == doctest::Approx(lc.p0).epsilon(0.05));
    }
}
