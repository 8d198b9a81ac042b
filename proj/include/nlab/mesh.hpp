#pragma once

#include <vector>

#include "nlab/fields.hpp"

namespace nlab {

/// Node set on [0,1]; two uniform pieces with transition at 1 - layer_width.
struct Mesh {
    std::vector<double> nodes;  // strictly increasing, nodes.front()=0, back()=1
    double layer_width = 0.5;   // sigma
    int coarse_count = 0;
    int fine_count = 0;

    int size() const { return static_cast<int>(nodes.size()); }
};

/// Two-piece layer-graded mesh: sigma = min(1/2, K*eps*ln(1/eps)).
Mesh make_layer_mesh(double eps, int coarse_count, int fine_count, double K);

/// Uniform mesh with `intervals` + 1 nodes, for the brute-force oracle.
Mesh make_uniform_mesh(int intervals);

/// Conservative decay-rate estimate from probe infima of b/a, a/b and f':
/// M_hat = sqrt(C1*C3)/4 with C1 = min(inf a/b, inf b/a)/2, C3 = inf f'.
double decay_rate_estimate(const ProblemInstance& instance);

}  // namespace nlab
