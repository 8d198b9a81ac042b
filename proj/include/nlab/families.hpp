#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlab/fields.hpp"

namespace nlab {

struct ReactionSpec {
    std::string kind = "linear";  // linear: f(u) = slope*(u - theta0)
    double theta0 = 0.0;          // affine: adds a constant offset (theta0 then
    double slope = 1.0;           // need not be a zero of f)
    double offset = 0.0;
};

struct FluxSpec {
    std::string kind = "constant";  // constant | linear | exp
    double e0 = 1.0;
    double e1 = 0.0;  // linear: e = e0 - e1*u; exp: e = e0*exp(-e1*u)
};

struct FamilyParams {
    int N = 2;
    double mu0 = 1.0;
    double k_star = 0.5;
    double alpha1 = 1.0;  // constant family a level
    double beta1 = 1.0;   // constant family b level
    double k = 1.5;       // ramp bridge endpoint multiple, k > 1
    double mu_star = 0.0;
    double tau_star = 0.0;
    ReactionSpec reaction;
    FluxSpec flux;
};

Reaction make_reaction(const ReactionSpec& spec);
BoundaryFlux make_flux(const FluxSpec& spec);

/// Built-in families: "constant", "ramp", "inconspicuous", "power_perturbed".
/// Unknown names throw ConfigError.
InstanceFamily make_family(const std::string& name, const FamilyParams& params);

struct LoadedConfig {
    InstanceFamily family;
    FamilyParams params;
    std::string family_name;
    std::optional<double> R;
    std::vector<double> radii;
};

/// Parses a JSON family configuration (text form).
LoadedConfig load_family_config(const std::string& json_text);

/// Reads and parses a JSON family configuration file.
LoadedConfig load_family_file(const std::string& path);

}  // namespace nlab
