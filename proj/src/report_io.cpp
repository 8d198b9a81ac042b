#include "nlab/report_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "nlab/errors.hpp"

namespace nlab {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// 17 significant digits: lossless double round-trip.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// nlohmann prints doubles shortest-round-trip, which is already lossless,
// but the contract asks for fixed 17-significant-digit decimal fields.
json jnum(double v) { return json::parse(fmt(v)); }

json decay_to_json(const DecayFit& d) {
    return {{"M0_hat", jnum(d.M0_hat)},     {"L0_hat", jnum(d.L0_hat)},
            {"r_squared", jnum(d.r_squared)}, {"window_lo", jnum(d.window_lo)},
            {"window_hi", jnum(d.window_hi)}, {"points_used", d.points_used}};
}

json row_to_json(const SweepRow& r) {
    return {{"R", jnum(r.R)},
            {"u_R_numeric", jnum(r.u_R_numeric)},
            {"u_R_predicted", jnum(r.u_R_predicted)},
            {"du_R_numeric", jnum(r.du_R_numeric)},
            {"du_R_predicted", jnum(r.du_R_predicted)},
            {"scaled_residual_u", jnum(r.scaled_residual_u)},
            {"scaled_residual_du", jnum(r.scaled_residual_du)},
            {"truncated_first_integral", jnum(r.truncated_first_integral)},
            {"full_first_integral", jnum(r.full_first_integral)},
            {"lem3_lhs_A", jnum(r.lem3_lhs_A)},
            {"lem3_rhs_A", jnum(r.lem3_rhs_A)},
            {"lem3_lhs_B", jnum(r.lem3_lhs_B)},
            {"lem3_rhs_B", jnum(r.lem3_rhs_B)},
            {"mass_u_numeric", jnum(r.mass_u_numeric)},
            {"mass_grad_numeric", jnum(r.mass_grad_numeric)}};
}

const char* kSweepColumns =
    "R,u_R_numeric,u_R_predicted,du_R_numeric,du_R_predicted,"
    "scaled_residual_u,scaled_residual_du,truncated_first_integral,"
    "full_first_integral,lem3_lhs_A,lem3_rhs_A,lem3_lhs_B,lem3_rhs_B,"
    "mass_u_numeric,mass_grad_numeric";

}  // namespace

std::string to_json(const LayerConstants& lc) {
    json j = {{"theta0", jnum(lc.theta0)},     {"mu0", jnum(lc.mu0)},
              {"p0", jnum(lc.p0)},             {"e_p0", jnum(lc.e_p0)},
              {"de_p0", jnum(lc.de_p0)},       {"f_p0", jnum(lc.f_p0)},
              {"dF", jnum(lc.dF)},             {"C0", jnum(lc.C0)},
              {"mass_u", jnum(lc.mass_u)},     {"mass_grad", jnum(lc.mass_grad)}};
    return j.dump(2);
}

std::string to_json(const BoundaryPrediction& bp) {
    json j = {{"u_R", jnum(bp.u_R)},
              {"du_R", jnum(bp.du_R)},
              {"mode", bp.mode == PredictionMode::Theorem1 ? "theorem1" : "perturbed"},
              {"correction_u", jnum(bp.correction_u)},
              {"H", jnum(bp.H)}};
    return j.dump(2);
}

std::string to_json(const SolutionProfile& p) {
    json j;
    j["eps"] = jnum(p.eps);
    j["R"] = jnum(p.instance.radius);
    j["N"] = p.instance.dimension;
    j["newton_iters"] = p.newton_iters;
    j["continuation_count"] = p.continuation_count;
    j["final_residual"] = jnum(p.final_residual);
    j["node_count"] = p.mesh.size();
    j["layer_width"] = jnum(p.mesh.layer_width);
    json s = json::array(), u = json::array(), du = json::array();
    for (int i = 0; i < p.mesh.size(); ++i) {
        s.push_back(jnum(p.mesh.nodes[i]));
        u.push_back(jnum(p.u[i]));
        du.push_back(jnum(p.du[i]));
    }
    j["s"] = std::move(s);
    j["u"] = std::move(u);
    j["du"] = std::move(du);
    return j.dump(2);
}

std::string to_json(const VerificationReport& rep) {
    json j;
    j["residual_exponent"] = jnum(rep.residual_exponent);
    j["passed"] = rep.passed();
    json verdicts = json::object();
    for (const auto& [k, v] : rep.verdicts) verdicts[k] = v;
    j["verdicts"] = std::move(verdicts);
    json rows = json::array();
    for (const auto& r : rep.rows) rows.push_back(row_to_json(r));
    j["rows"] = std::move(rows);
    json decay = json::array();
    for (const auto& d : rep.decay) decay.push_back(decay_to_json(d));
    j["decay"] = std::move(decay);
    return j.dump(2);
}

std::string to_json(const ConcentrationTable& t) {
    json rows = json::array();
    for (const auto& r : t.rows)
        rows.push_back({{"R", jnum(r.R)},
                        {"I1", jnum(r.I1)},
                        {"I2", jnum(r.I2)},
                        {"pointwise", jnum(r.pointwise)}});
    json j = {{"mass_u", jnum(t.mass_u)},
              {"mass_grad", jnum(t.mass_grad)},
              {"r0", jnum(t.r0)},
              {"verdict", t.verdict},
              {"rows", std::move(rows)}};
    return j.dump(2);
}

std::string to_csv(const SolutionProfile& p) {
    std::ostringstream os;
    os << "s,r,u,du\n";
    double R = p.instance.radius;
    for (int i = 0; i < p.mesh.size(); ++i)
        os << fmt(p.mesh.nodes[i]) << ',' << fmt(p.mesh.nodes[i] * R) << ','
           << fmt(p.u[i]) << ',' << fmt(p.du[i]) << '\n';
    return os.str();
}

std::string to_csv(const VerificationReport& rep) {
    std::ostringstream os;
    os << kSweepColumns << '\n';
    for (const auto& r : rep.rows)
        os << fmt(r.R) << ',' << fmt(r.u_R_numeric) << ',' << fmt(r.u_R_predicted) << ','
           << fmt(r.du_R_numeric) << ',' << fmt(r.du_R_predicted) << ','
           << fmt(r.scaled_residual_u) << ',' << fmt(r.scaled_residual_du) << ','
           << fmt(r.truncated_first_integral) << ',' << fmt(r.full_first_integral) << ','
           << fmt(r.lem3_lhs_A) << ',' << fmt(r.lem3_rhs_A) << ',' << fmt(r.lem3_lhs_B)
           << ',' << fmt(r.lem3_rhs_B) << ',' << fmt(r.mass_u_numeric) << ','
           << fmt(r.mass_grad_numeric) << '\n';
    return os.str();
}

std::string to_csv(const ConcentrationTable& t) {
    std::ostringstream os;
    os << "R,I1,I2,pointwise\n";
    for (const auto& r : t.rows)
        os << fmt(r.R) << ',' << fmt(r.I1) << ',' << fmt(r.I2) << ','
           << fmt(r.pointwise) << '\n';
    return os.str();
}

void write_atomic(const std::string& path, const std::string& content) {
    fs::path target(path);
    fs::path dir = target.parent_path();
    if (dir.empty()) dir = ".";
    fs::path tmp = dir / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot open output file: " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw ConfigError("write failure: " + tmp.string());
    }
    fs::rename(tmp, target);
}

}  // namespace nlab
