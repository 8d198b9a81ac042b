#pragma once

#include <string>

#include "nlab/fields.hpp"

namespace nlab {

/// Layer quantities determined by f, e and mu0 alone.
struct LayerConstants {
    double theta0 = 0.0;
    double mu0 = 0.0;
    double p0 = 0.0;
    double e_p0 = 0.0;
    double de_p0 = 0.0;   // e'(p0)
    double f_p0 = 0.0;
    double dF = 0.0;      // F(p0) - F(theta0)
    double C0 = 0.0;
    double mass_u = 0.0;     // m1
    double mass_grad = 0.0;  // m2
};

enum class PredictionMode { Theorem1, Perturbed };

struct BoundaryPrediction {
    double u_R = 0.0;
    double du_R = 0.0;
    PredictionMode mode = PredictionMode::Theorem1;
    double correction_u = 0.0;  // full second-order term of u(R)
    double H = 0.0;             // curvature-corrected coefficient term
};

enum class Regime { PerturbationDominated, Balanced, CurvatureDominated };

struct RegimeReport {
    double tau_star = 0.0;
    Regime regime = Regime::Balanced;
    double leading_correction_u = 0.0;
    double leading_correction_du = 0.0;
    double decay_exponent = 0.0;  // min(1, tau_star)
};

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::PerturbationDominated: return "perturbation_dominated";
        case Regime::Balanced: return "balanced";
        case Regime::CurvatureDominated: return "curvature_dominated";
    }
    return "?";
}

/// Unique p0 > theta0 with e(p0) = sqrt(2*mu0*(F(p0)-F(theta0))), to 1e-12.
double solve_p0(const Reaction& f, const BoundaryFlux& e, double mu0);

/// H(R) = (N-1)/R + (a'(R)/a(R) + b'(R)/b(R))/2.
double curvature_term(const ProblemInstance& instance);

/// Evaluates p0, C0 and the concentration masses for the instance.
LayerConstants compute_constants(const ProblemInstance& instance);

/// Two-term boundary prediction; `perturbed` adds the b/a - mu0 correction.
BoundaryPrediction predict_boundary(const ProblemInstance& instance, PredictionMode mode,
                                    const InstanceFamily* family = nullptr);

/// Classifies the tau_star trichotomy and evaluates the dominant
/// correction terms at radius R.
RegimeReport classify_regime(const InstanceFamily& family, double R);

}  // namespace nlab
