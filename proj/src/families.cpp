#include "nlab/families.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace nlab {

namespace {

ScalarField1D constant_field(double c, const std::string& label) {
    ScalarField1D f;
    f.value = [c](double) { return c; };
    f.deriv1 = [](double) { return 0.0; };
    f.deriv2 = [](double) { return 0.0; };
    f.label = label;
    return f;
}

// Quintic smoothstep: C^2 monotone bridge from 0 to 1 on [0,1].
double smoothstep5(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}
double smoothstep5_d1(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return 30.0 * x * x * (1.0 - x) * (1.0 - x);
}
double smoothstep5_d2(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x);
}

}  // namespace

Reaction make_reaction(const ReactionSpec& spec) {
    Reaction f;
    if (spec.kind == "linear" || spec.kind == "affine") {
        double s = spec.slope;
        double t0 = spec.theta0;
        double c = spec.kind == "affine" ? spec.offset : 0.0;
        f.value = [s, t0, c](double u) { return s * (u - t0) + c; };
        f.deriv = [s](double) { return s; };
        f.root = t0;
    } else {
        throw ConfigError("unknown reaction kind: " + spec.kind);
    }
    return f;
}

BoundaryFlux make_flux(const FluxSpec& spec) {
    BoundaryFlux e;
    if (spec.kind == "constant") {
        double e0 = spec.e0;
        e.value = [e0](double) { return e0; };
        e.deriv = [](double) { return 0.0; };
    } else if (spec.kind == "linear") {
        double e0 = spec.e0, e1 = spec.e1;
        e.value = [e0, e1](double u) { return e0 - e1 * u; };
        e.deriv = [e1](double) { return -e1; };
    } else if (spec.kind == "exp") {
        double e0 = spec.e0, e1 = spec.e1;
        e.value = [e0, e1](double u) { return e0 * std::exp(-e1 * u); };
        e.deriv = [e0, e1](double u) { return -e1 * e0 * std::exp(-e1 * u); };
    } else {
        throw ConfigError("unknown flux kind: " + spec.kind);
    }
    return e;
}

InstanceFamily make_family(const std::string& name, const FamilyParams& p) {
    if (p.N < 2) throw ConfigError("dimension N must be an integer >= 2");
    if (!(p.k_star > 0.0 && p.k_star < 1.0)) throw ConfigError("k_star must lie in (0,1)");

    InstanceFamily fam;
    fam.name = name;
    Reaction reaction = make_reaction(p.reaction);
    BoundaryFlux flux = make_flux(p.flux);

    auto base_instance = [p, reaction, flux](double R) {
        ProblemInstance inst;
        inst.dimension = p.N;
        inst.radius = R;
        inst.f = reaction;
        inst.e = flux;
        inst.k_star = p.k_star;
        return inst;
    };

    if (name == "constant") {
        if (!(p.alpha1 > 0.0 && p.beta1 > 0.0))
            throw ConfigError("constant family needs alpha1, beta1 > 0");
        fam.ratio_mode = RatioMode::Exact;
        double mu0 = p.beta1 / p.alpha1;
        fam.make = [base_instance, p, mu0](double R) {
            ProblemInstance inst = base_instance(R);
            inst.a = constant_field(p.alpha1, "a");
            inst.b = constant_field(p.beta1, "b");
            inst.mu0 = mu0;
            return inst;
        };
    } else if (name == "ramp") {
        // a = k* on [0, k*R], quintic bridge towards 1 on [k*R, kR]; b = mu0*a.
        if (!(p.k > 1.0)) throw ConfigError("ramp family needs k > 1");
        fam.ratio_mode = RatioMode::Exact;
        fam.make = [base_instance, p](double R) {
            ProblemInstance inst = base_instance(R);
            double lo = p.k_star * R;
            double w = (p.k - p.k_star) * R;
            double amp = 1.0 - p.k_star;
            double ks = p.k_star;
            ScalarField1D a;
            a.value = [lo, w, amp, ks](double r) { return ks + amp * smoothstep5((r - lo) / w); };
            a.deriv1 = [lo, w, amp](double r) { return amp / w * smoothstep5_d1((r - lo) / w); };
            a.deriv2 = [lo, w, amp](double r) {
                return amp / (w * w) * smoothstep5_d2((r - lo) / w);
            };
            a.label = "a";
            ScalarField1D b = a;
            double mu0 = p.mu0;
            b.value = [a, mu0](double r) { return mu0 * a.value(r); };
            b.deriv1 = [a, mu0](double r) { return mu0 * a.deriv1(r); };
            b.deriv2 = [a, mu0](double r) { return mu0 * a.deriv2(r); };
            b.label = "b";
            inst.a = a;
            inst.b = b;
            inst.mu0 = mu0;
            return inst;
        };
    } else if (name == "inconspicuous") {
        // a = (N-1)(R-r)/R + 1 with b = mu0*a: the curvature term cancels at r=R.
        fam.ratio_mode = RatioMode::Exact;
        fam.make = [base_instance, p](double R) {
            ProblemInstance inst = base_instance(R);
            double slope = -static_cast<double>(p.N - 1) / R;
            ScalarField1D a;
            a.value = [slope, R](double r) { return 1.0 + slope * (r - R); };
            a.deriv1 = [slope](double) { return slope; };
            a.deriv2 = [](double) { return 0.0; };
            a.label = "a";
            ScalarField1D b;
            double mu0 = p.mu0;
            b.value = [slope, R, mu0](double r) { return mu0 * (1.0 + slope * (r - R)); };
            b.deriv1 = [slope, mu0](double) { return mu0 * slope; };
            b.deriv2 = [](double) { return 0.0; };
            b.label = "b";
            inst.a = a;
            inst.b = b;
            inst.mu0 = mu0;
            return inst;
        };
    } else if (name == "power_perturbed") {
        if (!(p.tau_star > 0.0)) throw ConfigError("power_perturbed family needs tau_star > 0");
        if (p.mu_star == 0.0) throw ConfigError("power_perturbed family needs mu_star != 0");
        fam.ratio_mode = RatioMode::PowerPerturbed;
        fam.mu_star = p.mu_star;
        fam.tau_star = p.tau_star;
        fam.make = [base_instance, p](double R) {
            ProblemInstance inst = base_instance(R);
            double level = p.mu0 + p.mu_star * std::pow(R, -p.tau_star);
            if (!(level > 0.0))
                throw ConfigError("power_perturbed family: b(R) would be non-positive");
            inst.a = constant_field(1.0, "a");
            inst.b = constant_field(level, "b");
            inst.mu0 = p.mu0;
            return inst;
        };
    } else {
        throw ConfigError("unknown family name: " + name);
    }
    return fam;
}

LoadedConfig load_family_config(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON config: ") + e.what());
    }
    if (!j.contains("family")) throw ConfigError("config missing required field 'family'");

    FamilyParams p;
    p.N = j.value("N", 2);
    p.mu0 = j.value("mu0", 1.0);
    p.k_star = j.value("k_star", 0.5);
    p.alpha1 = j.value("alpha1", 1.0);
    p.beta1 = j.value("beta1", 1.0);
    p.k = j.value("k", 1.5);
    p.mu_star = j.value("mu_star", 0.0);
    p.tau_star = j.value("tau_star", 0.0);
    if (j.contains("reaction")) {
        const auto& r = j["reaction"];
        p.reaction.kind = r.value("kind", "linear");
        p.reaction.theta0 = r.value("theta0", 0.0);
        p.reaction.slope = r.value("slope", 1.0);
        p.reaction.offset = r.value("offset", 0.0);
    }
    if (j.contains("flux")) {
        const auto& e = j["flux"];
        p.flux.kind = e.value("kind", "constant");
        p.flux.e0 = e.value("e0", 1.0);
        p.flux.e1 = e.value("e1", 0.0);
    }

    LoadedConfig cfg;
    cfg.family_name = j["family"].get<std::string>();
    cfg.params = p;
    cfg.family = make_family(cfg.family_name, p);
    if (j.contains("R")) cfg.R = j["R"].get<double>();
    if (j.contains("radii")) cfg.radii = j["radii"].get<std::vector<double>>();
    return cfg;
}

LoadedConfig load_family_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_family_config(ss.str());
}

}  // namespace nlab
