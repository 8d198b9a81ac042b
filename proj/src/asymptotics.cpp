#include "nlab/asymptotics.hpp"

#include <cmath>

#include "nlab/assumptions.hpp"
#include "nlab/quadrature.hpp"
#include "nlab/root_finding.hpp"

namespace nlab {

double solve_p0(const Reaction& f, const BoundaryFlux& e, double mu0) {
    if (!(mu0 > 0.0)) throw DomainError("solve_p0: mu0 must be positive");
    const double theta0 = f.root;
    auto residual = [&](double p) { return e(p) - std::sqrt(2.0 * mu0 * delta_F(f, p)); };
    auto dresidual = [&](double p) {
        double dF = delta_F(f, p);
        if (dF <= 0.0) return e.d1(p);
        return e.d1(p) - mu0 * f(p) / std::sqrt(2.0 * mu0 * dF);
    };
    // residual is positive just right of theta0 and strictly decreasing.
    return bracketed_root(residual, dresidual, theta0, 1.0, 1e6, 1e-12);
}

double curvature_term(const ProblemInstance& inst) {
    const double R = inst.radius;
    double aR = inst.a(R);
    double bR = inst.b(R);
    if (!(aR > 0.0 && bR > 0.0)) throw DomainError("curvature_term: a(R), b(R) must be positive");
    return (inst.dimension - 1) / R + 0.5 * (inst.a.d1(R) / aR + inst.b.d1(R) / bR);
}

LayerConstants compute_constants(const ProblemInstance& inst) {
    LayerConstants lc;
    lc.theta0 = inst.f.root;
    lc.mu0 = inst.mu0;
    lc.p0 = solve_p0(inst.f, inst.e, inst.mu0);
    lc.e_p0 = inst.e(lc.p0);
    lc.de_p0 = inst.e.d1(lc.p0);
    lc.f_p0 = inst.f(lc.p0);
    lc.dF = delta_F(inst.f, lc.p0);

    const double theta0 = lc.theta0;
    const double p0 = lc.p0;
    const double dFp0 = lc.dF;
    const Reaction& f = inst.f;

    // All three integrands have removable behavior at t = theta0 (limits
    // 0, 1/sqrt(f'(theta0)), 0); the open Gauss rule never evaluates there.
    auto sqrt_ratio = [&](double t) { return std::sqrt(delta_F(f, t) / dFp0); };
    auto m1_integrand = [&](double t) {
        double dF = delta_F(f, t);
        if (dF <= 0.0) return 1.0 / std::sqrt(f.d1(theta0));
        return (t - theta0) / std::sqrt(2.0 * dF);
    };
    auto m2_integrand = [&](double t) { return std::sqrt(2.0 * std::max(0.0, delta_F(f, t))); };

    double I_c0 = adaptive_gauss(sqrt_ratio, theta0, p0, 1e-10);
    double I_m1 = adaptive_gauss(m1_integrand, theta0, p0, 1e-10);
    double I_m2 = adaptive_gauss(m2_integrand, theta0, p0, 1e-10);

    lc.C0 = I_c0 / (inst.mu0 * lc.f_p0 / lc.e_p0 - lc.de_p0);
    lc.mass_u = I_m1 / std::sqrt(inst.mu0);
    lc.mass_grad = std::sqrt(inst.mu0) * I_m2;

    // Consistency gates on the computed constants.
    if (std::fabs(lc.e_p0 - std::sqrt(2.0 * inst.mu0 * lc.dF)) > 1e-10)
        throw DomainError("inconsistent constants: root residual exceeds 1e-10");
    if (!(lc.C0 > 0.0)) throw DomainError("inconsistent constants: C0 not positive");
    double fp_lo = f.d1(theta0), fp_hi = f.d1(theta0);
    for (int i = 0; i <= 256; ++i) {
        double fp = f.d1(theta0 + (p0 - theta0) * i / 256.0);
        fp_lo = std::min(fp_lo, fp);
        fp_hi = std::max(fp_hi, fp);
    }
    double ratio = lc.mass_u / (p0 - theta0);
    if (ratio < 1.0 / std::sqrt(inst.mu0 * fp_hi) - 1e-8 ||
        ratio > 1.0 / std::sqrt(inst.mu0 * fp_lo) + 1e-8)
        throw DomainError("inconsistent constants: mass_u outside the f' band");
    return lc;
}

BoundaryPrediction predict_boundary(const ProblemInstance& inst, PredictionMode mode,
                                    const InstanceFamily* family) {
    LayerConstants lc = compute_constants(inst);
    double H = curvature_term(inst);

    BoundaryPrediction pred;
    pred.mode = mode;
    pred.H = H;

    if (mode == PredictionMode::Theorem1) {
        if (family && family->ratio_mode == RatioMode::PowerPerturbed &&
            family->tau_star <= 1.0)
            throw DomainError("mode invalid: perturbation not negligible (tau_star <= 1)");
        pred.correction_u = lc.C0 * H;
    } else {
        // Coefficient -dF/(mu0 f - e e'): matches dp/dmu from differentiating
        // e(p)^2 = 2 mu dF(p), the exact constant-ratio reduction.
        double ratio_gap = ratio_at_boundary(inst) - inst.mu0;
        double perturb = -lc.dF / (inst.mu0 * lc.f_p0 - lc.e_p0 * lc.de_p0) * ratio_gap;
        pred.correction_u = lc.C0 * H + perturb;
    }
    pred.u_R = lc.p0 + pred.correction_u;
    pred.du_R = lc.e_p0 + lc.de_p0 * pred.correction_u;
    return pred;
}

RegimeReport classify_regime(const InstanceFamily& family, double R) {
    if (family.ratio_mode != RatioMode::PowerPerturbed)
        throw DomainError("classify_regime: family is not power_perturbed");
    if (!(family.tau_star > 0.0)) throw DomainError("invalid exponent: tau_star must be positive");

    ProblemInstance inst = family.instance(R);
    LayerConstants lc = compute_constants(inst);
    double H = curvature_term(inst);
    double perturb = -family.mu_star * lc.dF /
                     (inst.mu0 * lc.f_p0 - lc.e_p0 * lc.de_p0) * std::pow(R, -family.tau_star);

    RegimeReport rep;
    rep.tau_star = family.tau_star;
    rep.decay_exponent = std::min(1.0, family.tau_star);
    if (family.tau_star < 1.0) {
        rep.regime = Regime::PerturbationDominated;
        rep.leading_correction_u = perturb;
    } else if (family.tau_star == 1.0) {
        rep.regime = Regime::Balanced;
        rep.leading_correction_u = perturb + lc.C0 * H;
    } else {
        rep.regime = Regime::CurvatureDominated;
        rep.leading_correction_u = lc.C0 * H;
    }
    rep.leading_correction_du = lc.de_p0 * rep.leading_correction_u;
    return rep;
}

}  // namespace nlab
