#include "willmore/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "willmore/errors.hpp"
#include "willmore/index.hpp"
#include "willmore/moebius.hpp"

namespace willmore::cli {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::config, msg); }

json vec_json(const Vec5& v) { return json::array({v(0), v(1), v(2), v(3), v(4)}); }

Mat5 parse_moebius(const json& list) {
    if (!list.is_array()) bad("'moebius' must be a list of generators");
    Mat5 M = Mat5::Identity();
    for (const json& g : list) {
        if (!g.is_object() || g.size() != 1) bad("each Moebius generator is a single-key object");
        const auto it = g.begin();
        const std::string key = it.key();
        const json& val = it.value();
        MoebiusGenerator gen;
        if (key == "translate") {
            if (!val.is_array() || val.size() != 3) bad("'translate' needs three numbers");
            gen = Translation{Eigen::Vector3d(val[0].get<double>(), val[1].get<double>(), val[2].get<double>())};
        } else if (key == "dilate") {
            gen = Dilation{val.get<double>()};
        } else if (key == "invert") {
            gen = UnitInversion{};
        } else if (key == "rotate") {
            if (!val.is_array() || val.size() != 3) bad("'rotate' needs a 3x3 matrix");
            Eigen::Matrix3d R;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) R(i, j) = val.at(i).at(j).get<double>();
            gen = Rotation{R};
        } else {
            bad("unknown Moebius generator '" + key + "'");
        }
        M = matrix_of(gen) * M;
    }
    return M;
}

struct Loaded {
    RunConfig cfg;
    Mat5 M = Mat5::Identity();
    bool has_moebius = false;
};

Loaded load(const std::string& text, const std::string& command) {
    Loaded L;
    L.cfg = parse_config(text, command);
    const json j = json::parse(text);
    if (j.contains("moebius")) {
        try {
            L.M = parse_moebius(j.at("moebius"));
        } catch (const json::exception& e) {
            bad(std::string("malformed Moebius list: ") + e.what());
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::config) throw;
            bad(std::string("invalid Moebius generator: ") + e.what());
        }
        L.has_moebius = true;
    }
    return L;
}

ParametricImmersion fixture_of(const RunConfig& cfg) { return build_fixture(cfg.fixture, cfg.params); }

void write_file(const RunConfig& cfg, const std::string& name, const std::string& body) {
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream f(std::filesystem::path(cfg.out_dir) / name);
    if (!f) throw Error(ErrorKind::config, "cannot write " + name + " into " + cfg.out_dir);
    f << body;
}

bool decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

std::string energy_impl(const RunConfig& cfg, const Mat5& M, bool has_moebius) {
    ParametricImmersion phi = fixture_of(cfg);
    json out;
    out["command"] = "energy";
    out["fixture"] = cfg.fixture;
    out["grid"] = {{"n_t", cfg.n_t}, {"n_theta", cfg.n_theta}};
    if (has_moebius) {
        const GroupCheck gc = verify_so41(M, cfg.tau_group);
        out["so41_defect"] = gc.defect;
        if (!gc.ok) throw Error(ErrorKind::validation, "composed Moebius matrix fails the SO(4,1) check");
        phi = moebius_transform_immersion(phi, M);
    }
    const QuadratureGrid G = default_grid(phi, cfg.n_t, cfg.n_theta);
    out["W"] = willmore_W(phi, G);
    out["E"] = traceless_E(phi, G);
    out["closed"] = phi.closed;
    if (phi.closed) {
        const EnergyIdentity id = energy_identity(phi, G);
        out["chi"] = id.chi;
        out["identity_defect"] = id.defect;
    } else {
        out["chi"] = nullptr;
        out["identity_defect"] = nullptr;
    }
    const ConformalGaussField F = build_cgm(phi, G);
    const EnergyReport e = energies(F);
    out["A"] = e.area;
    out["D"] = e.dirichlet;
    const std::string text = out.dump(2) + "\n";
    write_file(cfg, "energy.json", text);
    return text;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& command) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        bad(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) bad("config must be a JSON object");
    static const std::vector<std::string> known = {"command", "fixture", "grid",  "family",
                                                   "annulus", "tolerances", "index", "output", "moebius"};
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end()) bad("unknown config key '" + key + "'");

    RunConfig c;
    try {
        c.command = j.value("command", command);
        if (!command.empty() && c.command != command)
            bad("config command '" + c.command + "' does not match '" + command + "'");
        if (c.command != "energy" && c.command != "neck_report" && c.command != "index_bound")
            bad("unknown command '" + c.command + "'");
        if (j.contains("fixture")) {
            const json& fx = j.at("fixture");
            if (fx.is_string()) {
                c.fixture = fx.get<std::string>();
            } else {
                c.fixture = fx.at("name").get<std::string>();
                if (fx.contains("params"))
                    for (const auto& [k, v] : fx.at("params").items()) c.params[k] = v.get<double>();
            }
        } else if (c.command != "energy") {
            c.fixture = "inverted_catenoid";
        } else {
            bad("energy needs a fixture");
        }
        if (j.contains("grid")) {
            c.n_t = j.at("grid").value("n_t", c.n_t);
            c.n_theta = j.at("grid").value("n_theta", c.n_theta);
        } else if (c.command != "energy") {
            c.n_t = 401;
            c.n_theta = 64;
        }
        if (c.n_t < 8 || c.n_theta < 8) bad("grid sizes must be at least 8");
        if (j.contains("family")) c.family = j.at("family").get<std::vector<double>>();
        if (c.command == "neck_report") {
            if (c.family.empty()) bad("family sweep is empty");
            for (std::size_t i = 0; i < c.family.size(); ++i) {
                if (!(c.family[i] > 0.0 && c.family[i] < 1.0)) bad("family values must lie in (0, 1)");
                if (i > 0 && !(c.family[i] < c.family[i - 1])) bad("family values must be strictly decreasing");
            }
        }
        if (j.contains("annulus")) {
            const auto a = j.at("annulus").get<std::vector<double>>();
            if (a.size() != 2 || !(a[1] > a[0]) || a[0] < 0.0 || a[1] > 2.0)
                bad("annulus must be [lo, hi] with 0 <= lo < hi <= 2 (multiples of the neck scale)");
            c.annulus_lo = a[0];
            c.annulus_hi = a[1];
        }
        if (j.contains("tolerances")) {
            const json& t = j.at("tolerances");
            c.tau_group = t.value("tau_group", c.tau_group);
            c.tau_null = t.value("tau_null", c.tau_null);
            c.certificate_tol = t.value("certificate", c.certificate_tol);
        }
        if (j.contains("index")) {
            c.lambda = j.at("index").value("lambda", c.lambda);
            c.J = j.at("index").value("J", c.J);
            if (c.J < 1) bad("J must be positive");
        }
        if (j.contains("output")) c.out_dir = j.at("output").value("dir", c.out_dir);
    } catch (const json::exception& e) {
        bad(std::string("malformed config: ") + e.what());
    }
    return c;
}

std::string cmd_energy(const RunConfig& cfg) { return energy_impl(cfg, Mat5::Identity(), false); }

std::string cmd_neck_report(const RunConfig& cfg) {
    json members = json::array();
    std::ostringstream csv;
    csv << "# schema=willmore.neck_report.v1\n";
    csv << "eps,t,alpha,beta,gamma,delta,Ystar_1,Ystar_2,Ystar_3,Ystar_4,Ystar_5\n";
    csv.precision(12);
    std::vector<double> ab, res, ratio, curv;
    for (double eps : cfg.family) {
        const ParametricImmersion phi = neck_member(eps);
        const QuadratureGrid G = default_grid(phi, cfg.n_t, cfg.n_theta);
        const ConformalGaussField F = build_cgm(phi, G);
        const double T = neck_scale(eps);
        const TRange R{cfg.annulus_lo * T, cfg.annulus_hi * T};
        const CylinderDiagnostics d = circle_quantities(F, R);
        const Reparametrization eu = reparametrize(F, ReparamMode::euclid_arclength_of_average, R);
        const LineFit fit = line_fit(eu.s, d.Ystar);
        const OscillationReport osc = oscillation(F, R);
        const ResidueReport residue = residue_identity_defect(F);
        const double K = gauss_curvature_integral(phi, G, R.ta, R.tb);
        const double whole_ell = circle_quantities(F).ell;
        for (std::size_t i = 0; i < d.t.size(); ++i) {
            csv << eps << ',' << d.t[i] << ',' << d.alpha[i] << ',' << d.beta[i] << ',' << d.gamma[i] << ','
                << d.delta[i];
            for (int c = 0; c < 5; ++c) csv << ',' << d.Ystar[i](c);
            csv << '\n';
        }
        const double sab = sup_alpha_over_beta(d);
        ab.push_back(sab);
        res.push_back(fit.residual);
        ratio.push_back(fit.null_ratio);
        curv.push_back(std::abs(K));
        members.push_back({{"eps", eps},
                           {"neck_scale", T},
                           {"annulus", {R.ta, R.tb}},
                           {"sup_alpha_over_beta", sab},
                           {"ell", whole_ell},
                           {"ell_annulus", d.ell},
                           {"gauss_curvature_annulus", K},
                           {"oscillation", osc.osc},
                           {"oscillation_bound", osc.bound},
                           {"residue_max_relative", residue.max_relative},
                           {"line_fit",
                            {{"a", vec_json(fit.a)},
                             {"b", vec_json(fit.b)},
                             {"residual", fit.residual},
                             {"a_eta2", fit.a_eta2},
                             {"b_eta2_minus_one", fit.b_eta2_minus_one},
                             {"ab_eta", fit.ab_eta},
                             {"null_ratio", fit.null_ratio},
                             {"causal_class", to_string(causal_class(fit.a, cfg.tau_null))}}}});
    }
    json out;
    out["command"] = "neck_report";
    out["grid"] = {{"n_t", cfg.n_t}, {"n_theta", cfg.n_theta}};
    out["members"] = members;
    out["trends"] = {{"alpha_over_beta_decreasing", decreasing(ab)},
                     {"fit_residual_decreasing", decreasing(res)},
                     {"null_ratio_decreasing", decreasing(ratio)},
                     {"gauss_curvature_decreasing", decreasing(curv)}};
    const std::string text = out.dump(2) + "\n";
    write_file(cfg, "neck_report.csv", csv.str());
    write_file(cfg, "neck_report.json", text);
    return text;
}

std::string cmd_index_bound(const RunConfig& cfg) {
    const ParametricImmersion phi = fixture_of(cfg);
    const QuadratureGrid G = default_grid(phi, cfg.n_t, cfg.n_theta);
    const ConformalGaussField F = build_cgm(phi, G);
    const double lambda = cfg.lambda > 0.0 ? cfg.lambda : cylinder_area(F, {});
    const IndexBoundReport rep = index_lower_bound(F, lambda, cfg.J);
    json pieces = json::array();
    for (const QuadraticFormReport& q : rep.pieces) {
        pieces.push_back({{"interval", {q.ta, q.tb}},
                          {"area", q.area},
                          {"ell", q.ell},
                          {"d2D", q.d2D},
                          {"bound", q.bound},
                          {"d2A_fd", q.d2A_fd},
                          {"r1_max", q.r1_max},
                          {"r2_max", q.r2_max},
                          {"negative", q.negative},
                          {"area_below_dirichlet", q.d2A_fd <= q.d2D + cfg.certificate_tol}});
    }
    json out;
    out["command"] = "index_bound";
    out["fixture"] = cfg.fixture;
    out["grid"] = {{"n_t", cfg.n_t}, {"n_theta", cfg.n_theta}};
    out["J"] = rep.J;
    out["lambda"] = rep.lambda;
    out["total_area"] = rep.total_area;
    out["pieces"] = pieces;
    out["count"] = rep.count;
    const std::string text = out.dump(2) + "\n";
    write_file(cfg, "index_bound.json", text);
    return text;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Conformal Gauss map laboratory"};
    app.require_subcommand(1);
    std::string config_path, out_dir;
    for (const char* name : {"energy", "neck_report", "index_bound"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "configuration file (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory");
    }
    auto fail = [&](int code, const std::string& kind, const std::string& msg, json extra = json::object()) {
        json e = {{"code", kind}, {"exit", code}, {"message", msg}};
        for (const auto& [k, v] : extra.items()) e[k] = v;
        err << json{{"error", e}}.dump() << '\n';
        return code;
    };
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return fail(config_error, "config", e.what());
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        std::ifstream f(config_path);
        if (!f) throw Error(ErrorKind::config, "cannot read config file '" + config_path + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        Loaded L = load(ss.str(), command);
        if (!out_dir.empty()) L.cfg.out_dir = out_dir;
        std::string text;
        if (command == "energy") text = energy_impl(L.cfg, L.M, L.has_moebius);
        else if (command == "neck_report") text = cmd_neck_report(L.cfg);
        else text = cmd_index_bound(L.cfg);
        out << text;
        return ok;
    } catch (const InfeasibleError& e) {
        return fail(infeasible, to_string(e.kind()), e.what(), {{"max_feasible_J", e.max_feasible()}});
    } catch (const Error& e) {
        const int code = e.kind() == ErrorKind::config ? config_error : numerical_failure;
        return fail(code, to_string(e.kind()), e.what());
    } catch (const std::exception& e) {
        return fail(numerical_failure, "internal", e.what());
    }
}

}  // namespace willmore::cli
