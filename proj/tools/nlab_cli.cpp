// Command-line front end: validate / solve / predict / sweep / classify /
// concentration / compare / describe over JSON family configurations.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "nlab/assumptions.hpp"
#include "nlab/asymptotics.hpp"
#include "nlab/errors.hpp"
#include "nlab/families.hpp"
#include "nlab/report_io.hpp"
#include "nlab/solver.hpp"
#include "nlab/verification.hpp"

namespace {

using nlohmann::json;

enum ExitCode { kOk = 0, kVerdictFailed = 1, kUsage = 2, kNumerical = 3 };

int g_log_level = 0;  // 0 error, 1 info, 2 debug

void log_info(const std::string& msg) {
    if (g_log_level >= 1) std::cerr << "[info] " << msg << "\n";
}
void log_debug(const std::string& msg) {
    if (g_log_level >= 2) std::cerr << "[debug] " << msg << "\n";
}

void emit(const std::string& output_path, const std::string& content) {
    if (output_path.empty())
        std::cout << content << "\n";
    else
        nlab::write_atomic(output_path, content);
}

std::vector<double> parse_radii(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw nlab::ConfigError("bad radius token: " + tok);
        out.push_back(v);
    }
    if (out.empty()) throw nlab::ConfigError("empty --radii list");
    return out;
}

// key=value numeric overrides patched into the raw config before loading.
std::string apply_overrides(std::string text, const std::vector<std::string>& overrides) {
    if (overrides.empty()) return text;
    json j = json::parse(text);
    for (const auto& ov : overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw nlab::ConfigError("override must be key=value: " + ov);
        std::string key = ov.substr(0, eq);
        double val = std::stod(ov.substr(eq + 1));
        json* node = &j;
        size_t start = 0, dot;
        while ((dot = key.find('.', start)) != std::string::npos) {
            node = &(*node)[key.substr(start, dot - start)];
            start = dot + 1;
        }
        (*node)[key.substr(start)] = val;
    }
    return j.dump();
}

struct CommonArgs {
    std::string input_path;
    std::string output_path;
    std::string format = "json";
    std::string radii_csv;
    double R = 0.0;
    std::string mode = "theorem1";
    int jobs = 1;
    double tol = 0.0;
    std::vector<std::string> overrides;
};

nlab::LoadedConfig load_config(const CommonArgs& args) {
    if (args.input_path.empty()) throw nlab::ConfigError("missing --input");
    std::ifstream in(args.input_path);
    if (!in) throw nlab::ConfigError("cannot read config: " + args.input_path);
    std::stringstream buf;
    buf << in.rdbuf();
    return nlab::load_family_config(apply_overrides(buf.str(), args.overrides));
}

double pick_radius(const CommonArgs& args, const nlab::LoadedConfig& cfg) {
    if (args.R > 0.0) return args.R;
    if (cfg.R) return *cfg.R;
    if (!cfg.radii.empty()) return cfg.radii.back();
    throw nlab::ConfigError("no radius: pass --R or set R in the config");
}

std::vector<double> pick_radii(const CommonArgs& args, const nlab::LoadedConfig& cfg) {
    if (!args.radii_csv.empty()) return parse_radii(args.radii_csv);
    if (!cfg.radii.empty()) return cfg.radii;
    throw nlab::ConfigError("no radii: pass --radii or set radii in the config");
}

nlab::SolverConfig solver_config(const CommonArgs& args) {
    nlab::SolverConfig sc;
    if (args.tol > 0.0) sc.newton_tol = args.tol;
    return sc;
}

nlab::PredictionMode parse_mode(const std::string& mode) {
    if (mode == "theorem1") return nlab::PredictionMode::Theorem1;
    if (mode == "perturbed") return nlab::PredictionMode::Perturbed;
    throw nlab::ConfigError("unknown --mode (use theorem1 or perturbed): " + mode);
}

int cmd_validate(const CommonArgs& args) {
    auto cfg = load_config(args);
    double R = pick_radius(args, cfg);
    nlab::ProblemInstance inst = cfg.family.instance(R);
    nlab::AssumptionReport rep = nlab::validate_assumptions(inst);
    json out;
    out["R"] = R;
    out["passed"] = rep.passed();
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"worst_point", c.worst_point},
                          {"detail", c.detail}});
    out["checks"] = std::move(checks);
    emit(args.output_path, out.dump(2));
    return rep.passed() ? kOk : kVerdictFailed;
}

int cmd_solve(const CommonArgs& args) {
    auto cfg = load_config(args);
    double R = pick_radius(args, cfg);
    log_info("solving at R = " + std::to_string(R));
    nlab::SolutionProfile prof = nlab::solve(cfg.family.instance(R), solver_config(args));
    log_debug("newton iterations: " + std::to_string(prof.newton_iters));
    emit(args.output_path,
         args.format == "csv" ? nlab::to_csv(prof) : nlab::to_json(prof));
    return kOk;
}

int cmd_predict(const CommonArgs& args) {
    auto cfg = load_config(args);
    double R = pick_radius(args, cfg);
    nlab::ProblemInstance inst = cfg.family.instance(R);
    nlab::LayerConstants lc = nlab::compute_constants(inst);
    nlab::BoundaryPrediction bp =
        nlab::predict_boundary(inst, parse_mode(args.mode), &cfg.family);
    json out;
    out["constants"] = json::parse(nlab::to_json(lc));
    out["prediction"] = json::parse(nlab::to_json(bp));
    out["R"] = R;
    emit(args.output_path, out.dump(2));
    return kOk;
}

int cmd_sweep(const CommonArgs& args) {
    auto cfg = load_config(args);
    nlab::SweepSpec spec;
    spec.family = cfg.family;
    spec.radii = pick_radii(args, cfg);
    spec.solver = solver_config(args);
    spec.mode = parse_mode(args.mode);
    spec.jobs = args.jobs;
    log_info("sweep over " + std::to_string(spec.radii.size()) + " radii");
    nlab::VerificationReport rep = nlab::sweep(spec);
    if (args.format == "csv") {
        emit(args.output_path, nlab::to_csv(rep));
    } else if (args.format == "plot") {
        // Two-column (x, y) files per check, for external plotting.
        std::string base = args.output_path.empty() ? "sweep" : args.output_path;
        auto dump_xy = [&](const std::string& name, auto&& get) {
            std::ostringstream os;
            os << "x,y\n";
            for (const auto& r : rep.rows) os << r.R << ',' << get(r) << '\n';
            nlab::write_atomic(base + "_" + name + ".csv", os.str());
        };
        dump_xy("scaled_residual_u", [](const nlab::SweepRow& r) { return r.scaled_residual_u; });
        dump_xy("scaled_residual_du", [](const nlab::SweepRow& r) { return r.scaled_residual_du; });
        dump_xy("lem3_gap_A",
                [](const nlab::SweepRow& r) { return std::fabs(r.lem3_lhs_A - r.lem3_rhs_A); });
        dump_xy("lem3_gap_B",
                [](const nlab::SweepRow& r) { return std::fabs(r.lem3_lhs_B - r.lem3_rhs_B); });
    } else {
        emit(args.output_path, nlab::to_json(rep));
    }
    return rep.passed() ? kOk : kVerdictFailed;
}

int cmd_classify(const CommonArgs& args) {
    auto cfg = load_config(args);
    double R = pick_radius(args, cfg);
    nlab::RegimeReport rep = nlab::classify_regime(cfg.family, R);
    json out = {{"tau_star", rep.tau_star},
                {"regime", nlab::to_string(rep.regime)},
                {"leading_correction_u", rep.leading_correction_u},
                {"leading_correction_du", rep.leading_correction_du},
                {"decay_exponent", rep.decay_exponent},
                {"R", R}};
    emit(args.output_path, out.dump(2));
    return kOk;
}

int cmd_concentration(const CommonArgs& args) {
    auto cfg = load_config(args);
    nlab::ConcentrationTable table = nlab::concentration_check(
        cfg.family, pick_radii(args, cfg), 5.0, solver_config(args));
    emit(args.output_path,
         args.format == "csv" ? nlab::to_csv(table) : nlab::to_json(table));
    return table.verdict ? kOk : kVerdictFailed;
}

int cmd_compare(const CommonArgs& args) {
    if (args.input_path.empty()) throw nlab::ConfigError("missing --input");
    std::ifstream in(args.input_path);
    if (!in) throw nlab::ConfigError("cannot read config: " + args.input_path);
    std::stringstream buf;
    buf << in.rdbuf();
    json j;
    try {
        j = json::parse(apply_overrides(buf.str(), args.overrides));
    } catch (const json::exception& e) {
        throw nlab::ConfigError(std::string("malformed JSON config: ") + e.what());
    }
    if (!j.contains("second") || !j.contains("case"))
        throw nlab::ConfigError("compare config needs `case` and a `second` family block");
    std::string which = j["case"].get<std::string>();
    nlab::Rk1Case cs;
    if (which == "I")
        cs = nlab::Rk1Case::I;
    else if (which == "II_i")
        cs = nlab::Rk1Case::II_i;
    else if (which == "II_ii")
        cs = nlab::Rk1Case::II_ii;
    else
        throw nlab::ConfigError("compare case must be I, II_i or II_ii");

    nlab::Rk1Params params;
    json first = j;
    first.erase("second");
    params.fam1 = nlab::load_family_config(first.dump()).family;
    params.fam2 = nlab::load_family_config(j["second"].dump()).family;
    params.R1 = j.value("R1", args.R > 0 ? args.R : 0.0);
    params.R2 = j.value("R2", 0.0);
    params.solver = solver_config(args);
    if (params.R1 <= 0.0) throw nlab::ConfigError("compare config needs R1 > 0");

    nlab::ComparisonVerdict v = nlab::compare_corollary_rk1(cs, params);
    json out = {{"case", which},
                {"numeric_ok", v.numeric_ok},
                {"prediction_ok", v.prediction_ok},
                {"u1", v.u1},
                {"u2", v.u2},
                {"du1", v.du1},
                {"du2", v.du2},
                {"detail", v.detail}};
    emit(args.output_path, out.dump(2));
    return (v.numeric_ok && v.prediction_ok) ? kOk : kVerdictFailed;
}

const std::map<std::string, std::string> kDescriptions = {
    {"validate",
     "validate --input CFG [--R R]\n"
     "  Checks the structural hypotheses on the coefficients, reaction and\n"
     "  boundary flux (sign, monotonicity and boundary-zone derivative bounds)\n"
     "  plus consistency of supplied derivatives. Exit 1 if any check fails."},
    {"solve",
     "solve --input CFG [--R R] [--output FILE] [--format json|csv] [--tol T]\n"
     "  Solves the rescaled boundary-layer problem on a graded mesh and writes\n"
     "  the profile (s, r, u, du) with solver diagnostics."},
    {"predict",
     "predict --input CFG [--R R] [--mode theorem1|perturbed]\n"
     "  Evaluates the two-term expansion of the boundary values: the limit p0\n"
     "  plus the curvature correction C0*H(R), and in perturbed mode the extra\n"
     "  b/a - mu0 term. Also reports the layer constants."},
    {"sweep",
     "sweep --input CFG [--radii R1,R2,...] [--mode M] [--jobs J] [--format F]\n"
     "  Solves a family across radii and confronts numerics with the two-term\n"
     "  expansion: scaled residuals, first-integral identities, boundary-zone\n"
     "  energy functionals and concentration masses. Exit 1 on failed verdicts."},
    {"classify",
     "classify --input CFG [--R R]\n"
     "  Reports the correction-balance regime (perturbation_dominated, balanced\n"
     "  or curvature_dominated) and the decay exponent min(1, tau*)."},
    {"concentration",
     "concentration --input CFG [--radii R1,R2,...]\n"
     "  Tracks the layer integrals of u - theta0 and u'^2 against their limit\n"
     "  masses, plus pointwise interior decay."},
    {"compare",
     "compare --input CFG\n"
     "  Orders boundary values of two instances per the monotone-comparison\n"
     "  corollary (cases I, II_i, II_ii); config carries `case`, `R1`/`R2`\n"
     "  and a `second` family block."},
};

int cmd_describe(const std::vector<std::string>& names) {
    if (names.empty()) {
        std::cout << "commands:\n";
        for (const auto& [name, _] : kDescriptions) std::cout << "  " << name << "\n";
        std::cout << "  describe\n";
        return kOk;
    }
    const std::string& name = names.front();
    if (name == "describe") {
        std::cout << "describe [COMMAND]\n  Prints command help; with no argument lists all commands.\n";
        return kOk;
    }
    auto it = kDescriptions.find(name);
    if (it == kDescriptions.end()) {
        std::cerr << "unknown command: " << name << "\n";
        return kUsage;
    }
    std::cout << it->second << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* lvl = std::getenv("NL_LOG_LEVEL")) {
        std::string s(lvl);
        if (s == "error")
            g_log_level = 0;
        else if (s == "info")
            g_log_level = 1;
        else if (s == "debug")
            g_log_level = 2;
        else {
            std::cerr << "NL_LOG_LEVEL must be error, info or debug\n";
            return kUsage;
        }
    }

    CLI::App app{"Boundary-layer asymptotics toolkit for radial semilinear Neumann problems"};
    app.require_subcommand(1);

    CommonArgs args;
    std::vector<std::string> describe_names;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--input", args.input_path, "JSON family configuration");
        sub->add_option("--output", args.output_path, "report path (default: stdout)");
        sub->add_option("--format", args.format, "json | csv | plot");
        sub->add_option("--radii", args.radii_csv, "comma-separated radii");
        sub->add_option("--R", args.R, "single radius");
        sub->add_option("--mode", args.mode, "theorem1 | perturbed");
        sub->add_option("--jobs", args.jobs, "sweep worker count");
        sub->add_option("--tol", args.tol, "Newton tolerance override");
        sub->add_option("overrides", args.overrides, "key=value numeric config overrides");
    };

    CLI::App* validate = app.add_subcommand("validate", "check structural hypotheses");
    CLI::App* solve = app.add_subcommand("solve", "solve one instance");
    CLI::App* predict = app.add_subcommand("predict", "two-term boundary expansion");
    CLI::App* sweep = app.add_subcommand("sweep", "radius sweep with verdicts");
    CLI::App* classify = app.add_subcommand("classify", "regime trichotomy");
    CLI::App* concentration =
        app.add_subcommand("concentration", "layer mass concentration check");
    CLI::App* compare = app.add_subcommand("compare", "monotone boundary comparison");
    CLI::App* describe = app.add_subcommand("describe", "command help");
    describe->add_option("name", describe_names, "command to describe");
    for (CLI::App* sub : {validate, solve, predict, sweep, classify, concentration, compare})
        add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (validate->parsed()) return cmd_validate(args);
        if (solve->parsed()) return cmd_solve(args);
        if (predict->parsed()) return cmd_predict(args);
        if (sweep->parsed()) return cmd_sweep(args);
        if (classify->parsed()) return cmd_classify(args);
        if (concentration->parsed()) return cmd_concentration(args);
        if (compare->parsed()) return cmd_compare(args);
        if (describe->parsed()) return cmd_describe(describe_names);
    } catch (const nlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    }
    return kUsage;
}
