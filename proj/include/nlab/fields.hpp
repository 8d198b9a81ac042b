#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <string>

#include "nlab/errors.hpp"

namespace nlab {

using Fn = std::function<double(double)>;

// Evaluates fn(x) and rejects non-finite results.
inline double eval_checked(const Fn& fn, double x, const char* what) {
    double v = fn(x);
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "evaluation failure: " << what << "(" << x << ") = " << v;
        throw EvaluationError(os.str());
    }
    return v;
}

/// A radial coefficient a(r) or b(r) with supplied derivatives on [0, inf).
struct ScalarField1D {
    Fn value;
    Fn deriv1;
    Fn deriv2;  // required for the diffusion coefficient, may be null otherwise
    std::string label;

    double operator()(double r) const { return eval_checked(value, r, label.c_str()); }
    double d1(double r) const { return eval_checked(deriv1, r, label.c_str()); }
    double d2(double r) const { return eval_checked(deriv2, r, label.c_str()); }
    bool has_d2() const { return static_cast<bool>(deriv2); }
};

/// Absorption nonlinearity f with its derivative and the zero theta0.
struct Reaction {
    Fn value;
    Fn deriv;
    double root = 0.0;  // theta0

    double operator()(double u) const { return eval_checked(value, u, "f"); }
    double d1(double u) const { return eval_checked(deriv, u, "f'"); }
};

/// Boundary flux e, strictly positive and non-increasing.
struct BoundaryFlux {
    Fn value;
    Fn deriv;

    double operator()(double u) const { return eval_checked(value, u, "e"); }
    double d1(double u) const { return eval_checked(deriv, u, "e'"); }
};

struct ProblemInstance {
    int dimension = 2;    // N >= 2
    double radius = 0.0;  // R > 0
    ScalarField1D a;
    ScalarField1D b;
    Reaction f;
    BoundaryFlux e;
    double mu0 = 1.0;     // reference limit of b(R)/a(R)
    double k_star = 0.5;  // inner cutoff in (0,1)
};

enum class RatioMode {
    Exact,           // b/a == mu0 identically
    Vanishing,       // b(R)/a(R) = mu0 + o(1)/R
    PowerPerturbed,  // b(R)/a(R) = mu0 + mu_star * R^(-tau_star)
};

inline const char* to_string(RatioMode m) {
    switch (m) {
        case RatioMode::Exact: return "exact";
        case RatioMode::Vanishing: return "vanishing";
        case RatioMode::PowerPerturbed: return "power_perturbed";
    }
    return "?";
}

/// A problem template parameterized by the radius.
struct InstanceFamily {
    std::string name;
    RatioMode ratio_mode = RatioMode::Exact;
    double mu_star = 0.0;   // only meaningful in power_perturbed mode
    double tau_star = 0.0;  // only meaningful in power_perturbed mode
    std::function<ProblemInstance(double R)> make;

    ProblemInstance instance(double R) const {
        if (!(R > 0)) throw DomainError("InstanceFamily: radius must be positive");
        return make(R);
    }
};

}  // namespace nlab
