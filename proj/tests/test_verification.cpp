#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nlab/families.hpp"
#include "nlab/report_io.hpp"
#include "nlab/verification.hpp"

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

}  // namespace

TEST_CASE("sweep: linear-constant expansion verdicts") {
    SweepSpec spec;
    spec.family = make_family("constant", base_params());
    spec.radii = {20.0, 40.0, 80.0};
    VerificationReport rep = sweep(spec);

    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.residual_exponent == 1.0);
    CHECK(rep.verdicts.at("expansion_ok_u"));
    CHECK(rep.passed());
    // scaled residual roughly halves per doubling
    CHECK(rep.rows[1].scaled_residual_u < 0.65 * rep.rows[0].scaled_residual_u);
    CHECK(rep.rows[2].scaled_residual_u < 0.65 * rep.rows[1].scaled_residual_u);
    // masses drift towards 1 and 0.5
    CHECK(std::fabs(rep.rows[2].mass_u_numeric - 1.0) <
          std::fabs(rep.rows[0].mass_u_numeric - 1.0));
    CHECK(std::fabs(rep.rows[2].mass_grad_numeric - 0.5) <
          std::fabs(rep.rows[0].mass_grad_numeric - 0.5));
    // decay fit present where the window is nonempty
    CHECK(rep.decay[2].points_used > 0);
    CHECK(rep.decay[2].r_squared > 0.99);
}

TEST_CASE("sweep input validation") {
    SweepSpec spec;
    spec.family = make_family("constant", base_params());
    spec.radii = {40.0};
    CHECK_THROWS_AS(sweep(spec), DomainError);
    spec.radii = {40.0, 30.0};
    CHECK_THROWS_AS(sweep(spec), DomainError);
    spec.radii = {5.0, 40.0};
    CHECK_THROWS_AS(sweep(spec), DomainError);
}

TEST_CASE("sweep results are independent of the job count") {
    SweepSpec spec;
    spec.family = make_family("constant", base_params());
    spec.radii = {20.0, 40.0, 80.0};
    VerificationReport serial = sweep(spec);
    spec.jobs = 3;
    VerificationReport parallel = sweep(spec);
    CHECK(to_json(serial) == to_json(parallel));  // bit-identical reports
}

TEST_CASE("decay fit: exponent and prefactor on the solved profile") {
    SolutionProfile p = solve(make_family("constant", base_params()).instance(80.0));
    DecayFit fit = fit_interior_decay(p);
    // u - theta0 ~ L exp(-M (R - r)) with M -> sqrt(mu0 f'(theta0)) = 1
    CHECK(fit.M0_hat == doctest::Approx(1.0).epsilon(0.05));
    CHECK(fit.r_squared > 0.999);
    CHECK(fit.points_used >= 12);

    DecayFit gfit = fit_interior_gradient_decay(p);
    CHECK(gfit.M0_hat == doctest::Approx(1.0).epsilon(0.05));
    CHECK(gfit.r_squared > 0.99);
}

TEST_CASE("decay fit: window exhausted at small R") {
    SolutionProfile p = solve(make_family("constant", base_params()).instance(20.0));
    CHECK_THROWS_WITH_AS(fit_interior_decay(p), doctest::Contains("window exhausted"),
                         DomainError);
}

TEST_CASE("lem3 functionals converge on the ramp family") {
    FamilyParams pp = base_params();
    pp.N = 3;
    pp.flux = {"linear", 2.0, 1.0};
    InstanceFamily fam = make_family("ramp", pp);
    double prev_gap_A = 1e300;
    for (double R : {40.0, 80.0, 160.0}) {
        Lem3Functionals l3 = lem3_functionals(solve(fam.instance(R)));
        double gap_A = std::fabs(l3.lhs_A - l3.rhs_A);
        CHECK(gap_A < prev_gap_A);
        prev_gap_A = gap_A;
        CHECK(std::fabs(l3.lhs_B - l3.rhs_B) < 1e-10);  // b = mu0 a: both sides vanish
    }
}

TEST_CASE("concentration check approaches the masses") {
    InstanceFamily fam = make_family("constant", base_params());
    ConcentrationTable t = concentration_check(fam, {20.0, 40.0, 80.0, 160.0});
    CHECK(t.mass_u == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(t.mass_grad == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(t.verdict);
    CHECK(std::fabs(t.rows.back().I1 - 1.0) < 0.01);
    CHECK(std::fabs(t.rows.back().I2 - 0.5) < 0.01);
    // pointwise interior value at r0 = 5 decays with R
    CHECK(t.rows.back().pointwise < t.rows.front().pointwise);
}

TEST_CASE("boundary comparison: case II(i), mu1 < mu2") {
    Rk1Params params;
    FamilyParams p1 = base_params();
    params.fam1 = make_family("constant", p1);
    FamilyParams p2 = base_params();
    p2.beta1 = 2.0;  // mu2 = 2
    params.fam2 = make_family("constant", p2);
    params.R1 = 100.0;
    ComparisonVerdict v = compare_corollary_rk1(Rk1Case::II_i, params);
    CHECK(v.numeric_ok);
    CHECK(v.prediction_ok);
    CHECK(v.u1 > v.u2);
    CHECK(v.u2 > 0.0);
    // e == 1 pins both derivatives to 1 exactly
    CHECK(v.du1 == doctest::Approx(v.du2).epsilon(1e-12));

    // decreasing flux restores the strict derivative ordering
    p1.flux = p2.flux = {"linear", 2.0, 1.0};
    params.fam1 = make_family("constant", p1);
    params.fam2 = make_family("constant", p2);
    ComparisonVerdict vs = compare_corollary_rk1(Rk1Case::II_i, params);
    CHECK(vs.numeric_ok);
    CHECK(vs.prediction_ok);
    CHECK(vs.du1 < vs.du2);

    // precondition: mu1 < mu2 required
    std::swap(params.fam1, params.fam2);
    CHECK_THROWS_AS(compare_corollary_rk1(Rk1Case::II_i, params), DomainError);
}

TEST_CASE("boundary comparison: case II(ii), same ratio, ordered slopes") {
    FamilyParams p = base_params();
    p.flux = {"linear", 2.0, 1.0};  // e' < 0 required
    Rk1Params params;
    params.fam1 = make_family("constant", p);       // a'/a + b'/b = 0 at R
    params.fam2 = make_family("inconspicuous", p);  // sum = -2(N-1)/R < 0
    params.R1 = 100.0;
    ComparisonVerdict v = compare_corollary_rk1(Rk1Case::II_ii, params);
    CHECK(v.numeric_ok);
    CHECK(v.prediction_ok);

    std::swap(params.fam1, params.fam2);  // slope order violated
    CHECK_THROWS_AS(compare_corollary_rk1(Rk1Case::II_ii, params), DomainError);
}

TEST_CASE("boundary comparison: case I, growing radius") {
    Rk1Params params;
    FamilyParams p = base_params();
    p.flux = {"linear", 2.0, 1.0};
    params.fam1 = make_family("constant", p);
    params.fam2 = make_family("constant", p);
    params.R1 = 50.0;
    params.R2 = 100.0;
    ComparisonVerdict v = compare_corollary_rk1(Rk1Case::I, params);
    CHECK(v.numeric_ok);
    CHECK(v.prediction_ok);

    params.R2 = 25.0;
    CHECK_THROWS_AS(compare_corollary_rk1(Rk1Case::I, params), DomainError);
}

TEST_CASE("report serialization round trip") {
    SweepSpec spec;
    spec.family = make_family("constant", base_params());
    spec.radii = {20.0, 40.0};
    VerificationReport rep = sweep(spec);

    std::string js = to_json(rep);
    CHECK(js.find("\"rows\"") != std::string::npos);
    CHECK(js.find("scaled_residual_u") != std::string::npos);

    std::string csv = to_csv(rep);
    CHECK(csv.rfind("R,u_R_numeric,u_R_predicted", 0) == 0);
    // header + one line per radius
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);

    SolutionProfile prof = solve(spec.family.instance(20.0));
    std::string pcsv = to_csv(prof);
    CHECK(pcsv.rfind("s,r,u,du", 0) == 0);

    // full-precision doubles survive the JSON round trip
    std::string pj = to_json(prof);
    CHECK(pj.find("\"eps\"") != std::string::npos);
}
