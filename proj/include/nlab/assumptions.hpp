#pragma once

#include <string>
#include <vector>

#include "nlab/fields.hpp"

namespace nlab {

/// Sampling grid for the numeric assumption checks.
struct ProbeGrid {
    int r_points = 2048;   // samples over [0, R]
    int u_points = 2048;   // samples over [u_lo, u_hi]
    double u_lo = -1.0;
    double u_hi = 4.0;
};

struct AssumptionCheck {
    std::string name;
    bool passed = false;
    double worst_point = 0.0;  // offending r or u sample
    std::string detail;
};

struct AssumptionReport {
    std::vector<AssumptionCheck> checks;
    bool passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
    const AssumptionCheck* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

/// Samples (A1)-(A3) plus the supplied-derivative consistency checks.
AssumptionReport validate_assumptions(const ProblemInstance& instance,
                                      const ProbeGrid& probe = {});

/// F(t) - F(theta0) = integral of f from theta0 to t, abstol 1e-12.
double delta_F(const Reaction& f, double t);

/// b(R)/a(R).
double ratio_at_boundary(const ProblemInstance& instance);

}  // namespace nlab
