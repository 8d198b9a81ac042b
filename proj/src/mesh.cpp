#include "nlab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlab/errors.hpp"

namespace nlab {

Mesh make_layer_mesh(double eps, int coarse_count, int fine_count, double K) {
    if (coarse_count < 4 || fine_count < 4)
        throw DomainError("make_layer_mesh: node counts too small");
    double sigma = std::min(0.5, K * eps * std::log(1.0 / eps));
    Mesh m;
    m.layer_width = sigma;
    m.coarse_count = coarse_count;
    m.fine_count = fine_count;
    m.nodes.reserve(coarse_count + fine_count + 1);
    double split = 1.0 - sigma;
    for (int i = 0; i < coarse_count; ++i)
        m.nodes.push_back(split * i / coarse_count);
    for (int i = 0; i <= fine_count; ++i)
        m.nodes.push_back(split + sigma * i / fine_count);
    m.nodes.front() = 0.0;
    m.nodes.back() = 1.0;
    return m;
}

Mesh make_uniform_mesh(int intervals) {
    if (intervals < 8) throw DomainError("make_uniform_mesh: too few intervals");
    Mesh m;
    m.layer_width = 0.5;
    m.coarse_count = intervals / 2;
    m.fine_count = intervals - intervals / 2;
    m.nodes.resize(intervals + 1);
    for (int i = 0; i <= intervals; ++i) m.nodes[i] = static_cast<double>(i) / intervals;
    return m;
}

double decay_rate_estimate(const ProblemInstance& inst) {
    const int n = 512;
    double inf_ab = std::numeric_limits<double>::infinity();
    double inf_ba = inf_ab;
    for (int i = 0; i <= n; ++i) {
        double r = inst.radius * i / n;
        double av = inst.a(r);
        double bv = inst.b(r);
        inf_ab = std::min(inf_ab, av / bv);
        inf_ba = std::min(inf_ba, bv / av);
    }
    double c1 = 0.5 * std::min(inf_ab, inf_ba);
    double c3 = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
        double u = inst.f.root + 4.0 * i / n;  // probe above theta0 where u lives
        c3 = std::min(c3, inst.f.d1(u));
    }
    if (!(c1 > 0.0 && c3 > 0.0)) throw DomainError("decay_rate_estimate: degenerate infima");
    return std::sqrt(c1 * c3) / 4.0;
}

}  // namespace nlab
