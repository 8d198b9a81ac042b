#pragma once

#include <map>
#include <string>
#include <vector>

#include "nlab/asymptotics.hpp"
#include "nlab/fields.hpp"
#include "nlab/solver.hpp"

namespace nlab {

struct SweepSpec {
    InstanceFamily family;
    std::vector<double> radii;  // strictly increasing, all >= 10
    SolverConfig solver;
    PredictionMode mode = PredictionMode::Theorem1;
    int jobs = 1;
};

struct DecayFit {
    double M0_hat = 0.0;
    double L0_hat = 0.0;
    double r_squared = 0.0;
    double window_lo = 0.0;  // in physical r
    double window_hi = 0.0;
    int points_used = 0;
};

struct SweepRow {
    double R = 0.0;
    double u_R_numeric = 0.0;
    double u_R_predicted = 0.0;
    double du_R_numeric = 0.0;
    double du_R_predicted = 0.0;
    double scaled_residual_u = 0.0;
    double scaled_residual_du = 0.0;
    double truncated_first_integral = 0.0;
    double full_first_integral = 0.0;
    double lem3_lhs_A = 0.0;
    double lem3_rhs_A = 0.0;
    double lem3_lhs_B = 0.0;
    double lem3_rhs_B = 0.0;
    double mass_u_numeric = 0.0;
    double mass_grad_numeric = 0.0;
};

struct VerificationReport {
    std::vector<SweepRow> rows;  // ordered by R
    std::vector<DecayFit> decay;
    std::map<std::string, bool> verdicts;
    double residual_exponent = 1.0;  // min(1, tau*) in power_perturbed mode
    bool passed() const {
        for (const auto& [k, v] : verdicts)
            if (!v) return false;
        return true;
    }
};

struct Lem3Functionals {
    double lhs_A = 0.0;
    double rhs_A = 0.0;
    double lhs_B = 0.0;
    double rhs_B = 0.0;
};

struct ConcentrationRow {
    double R = 0.0;
    double I1 = 0.0;         // R * int (u - theta0) dr over the layer zone
    double I2 = 0.0;         // R * int u'^2 dr over the layer zone
    double pointwise = 0.0;  // u(r0) - theta0 at a fixed interior r0
};

struct ConcentrationTable {
    std::vector<ConcentrationRow> rows;
    double mass_u = 0.0;
    double mass_grad = 0.0;
    double r0 = 0.0;
    bool verdict = false;
};

enum class Rk1Case { I, II_i, II_ii };

struct Rk1Params {
    InstanceFamily fam1;
    InstanceFamily fam2;
    double R1 = 0.0;
    double R2 = 0.0;  // ignored for the II cases (R2 = R1)
    SolverConfig solver;
};

struct ComparisonVerdict {
    bool numeric_ok = false;
    bool prediction_ok = false;
    double u1 = 0.0, u2 = 0.0;    // boundary values
    double du1 = 0.0, du2 = 0.0;  // boundary derivatives (physical r)
    std::string detail;
};

/// Solves each radius, confronts predictions and fills the report rows.
VerificationReport sweep(const SweepSpec& spec);

/// Log-linear fit of u(r) - theta0 over the interior window.
DecayFit fit_interior_decay(const SolutionProfile& profile);

/// Log-linear fit of (r/R)^(N-1) u'(r) over the interior window.
DecayFit fit_interior_gradient_decay(const SolutionProfile& profile);

Lem3Functionals lem3_functionals(const SolutionProfile& profile);

ConcentrationTable concentration_check(const InstanceFamily& family,
                                       const std::vector<double>& radii, double r0 = 5.0,
                                       const SolverConfig& config = {});

ComparisonVerdict compare_corollary_rk1(Rk1Case which, const Rk1Params& params);

}  // namespace nlab
