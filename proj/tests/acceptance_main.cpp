// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "oracles.hpp"
#include "willmore/conformal_gauss.hpp"
#include "willmore/cylinder_analysis.hpp"
#include "willmore/errors.hpp"
#include "willmore/gauge.hpp"
#include "willmore/immersion.hpp"
#include "willmore/index.hpp"
#include "willmore/moebius.hpp"

using namespace willmore;
using oracle::pi;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [violated: " << what << "]";
        }
    }
};

double rel(double value, double ref) { return std::abs(value - ref) / std::max(std::abs(ref), 1.0); }

double desitter_defect(const ConformalGaussField& F) {
    double d = 0;
    for (const Vec5& Y : F.Y) d = std::max(d, std::abs(eta_inner(Y, Y) - 1.0));
    return d;
}

std::vector<ParametricImmersion> all_fixtures() {
    return {round_sphere(1.0),       clifford_torus(),     ellipsoid(2, 1, 1),         catenoid(-2, 2),
            inverted_catenoid(0.1, -2, 2), neck_member(0.1), clifford_torus_s3(), umbilic_band(-0.5, 0.5)};
}

// Smallest |Y5 - Y4| / |Y| of the lifted chart nodes after M: how close the surface
// comes to the point sent to infinity.
double pole_clearance(const ParametricImmersion& phi, const QuadratureGrid& g, const Mat5& M) {
    double c = 1e300;
    for (double t : g.t.nodes)
        for (double s : g.s.nodes) {
            const Vec5 v = M * oracle::lift(phi.evaluate(t, s).x.head<3>());
            c = std::min(c, std::abs(v(4) - v(3)) / v.norm());
        }
    return c;
}

// Random composition that keeps the torus well away from infinity.
Mat5 tame_composition(gen::Rng& r, const ParametricImmersion& phi, const QuadratureGrid& g) {
    for (;;) {
        const Mat5 M = gen::composition(r, 4);
        if (pole_clearance(phi, g, M) > 0.05) return M;
    }
}

// ---------------------------------------------------------------------------

Outcome energy_identities() {
    Outcome o;
    const auto S = round_sphere(1.0);
    const auto start = std::chrono::steady_clock::now();
    const auto gs = default_grid(S, 128, 128);
    const double W = willmore_W(S, gs), E = traceless_E(S, gs);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto T = clifford_torus();
    const auto gt = default_grid(T, 128, 128);
    const double Wt = willmore_W(T, gt), ref = oracle::torus_W(std::sqrt(2.0));
    const double ds = energy_identity(S, gs).defect, dt = energy_identity(T, gt).defect;
    o.detail << "sphere |W-4pi|=" << std::abs(W - 4 * pi) << " |E|=" << std::abs(E) << " time=" << secs
             << "s torus |W-oracle|=" << std::abs(Wt - ref) << " identity defects " << ds << ", " << dt;
    o.require(std::abs(W - 4 * pi) <= 1e-6, "sphere W");
    o.require(std::abs(E) <= 1e-8, "sphere E");
    o.require(secs < 1.0, "runtime");
    o.require(std::abs(Wt - ref) <= 1e-5, "torus W");
    o.require(ds <= 1e-5 && dt <= 1e-5, "E - 2W + 4 pi chi");
    return o;
}

Outcome desitter_and_conformality() {
    Outcome o;
    double worst_ds = 0, worst_conf = 0;
    for (const auto& phi : all_fixtures()) {
        const ConformalGaussField F = build_cgm(phi, default_grid(phi, 128, 128));
        const double d = desitter_defect(F), c = conformality_defect(F).max_defect;
        worst_ds = std::max(worst_ds, d);
        worst_conf = std::max(worst_conf, c);
        o.require(d <= 1e-8, phi.name + " de Sitter");
        o.require(c <= 1e-4, phi.name + " conformality");
    }
    o.detail << all_fixtures().size() << " fixtures, max ||Y|^2-1|=" << worst_ds << " max conformality defect="
             << worst_conf;
    return o;
}

Outcome equivariance() {
    Outcome o;
    const auto T = clifford_torus();
    const auto g = default_grid(T, 64, 64);
    const ConformalGaussField F = build_cgm(T, g);
    gen::Rng r(1003);
    double worst = 0, worst_group = 0;
    for (int k = 0; k < 20; ++k) {
        const Mat5 M = tame_composition(r, T, g);
        worst_group = std::max(worst_group, verify_so41(M).defect);
        const ConformalGaussField G = build_cgm(moebius_transform_immersion(T, M), g);
        for (int n = 0; n < G.size(); ++n) worst = std::max(worst, oracle::sup_diff(G.Y[n], Vec5(M * F.Y[n])));
    }
    o.detail << "20 compositions, max nodal |Y(M.phi) - M Y(phi)|=" << worst << " max group defect=" << worst_group;
    o.require(worst <= 1e-6, "nodal equivariance");
    o.require(worst_group <= 1e-9, "M^T eta M = eta");
    return o;
}

Outcome area_dirichlet_traceless() {
    Outcome o;
    double worst = 0;
    for (const auto& phi : {round_sphere(1.0), clifford_torus(), ellipsoid(2, 1, 1), clifford_torus_s3()}) {
        const EnergyReport e = energies(build_cgm(phi, default_grid(phi, 128, 128)));
        const double half = 0.5 * e.E_of_source;
        const double d = std::max({rel(e.area, half), rel(e.dirichlet, half), rel(e.area, e.dirichlet)});
        worst = std::max(worst, d);
        o.require(d <= 1e-5, phi.name);
    }
    const auto T = clifford_torus();
    const auto g = default_grid(T, 128, 128);
    const double A0 = energies(build_cgm(T, g)).area;
    gen::Rng r(1004);
    double worst_inv = 0;
    for (int k = 0; k < 5; ++k) {
        const Mat5 M = tame_composition(r, T, g);
        const double A = energies(build_cgm(moebius_transform_immersion(T, M), g)).area;
        worst_inv = std::max(worst_inv, rel(A, A0));
    }
    o.require(worst_inv <= 1e-5, "Moebius invariance of A");
    o.detail << "max relative spread of A, D, E/2 = " << worst << "; A under 5 Moebius maps: " << worst_inv;
    return o;
}

Outcome willmore_discrimination() {
    Outcome o;
    const auto N = inverted_catenoid(0.5, -1.5, 1.5);
    std::vector<double> res;
    for (int n : {16, 32, 64, 128}) {
        const QuadratureGrid g{make_axis(Rule::trapezoid, -1.5, 1.5, n), make_axis(Rule::periodic, 0, 2 * pi, 32)};
        res.push_back(willmore_residual(build_cgm(N, g)).sup);
    }
    o.detail << "inverted catenoid residual at 16/32/64/128 rows:";
    for (double v : res) o.detail << ' ' << v;
    for (std::size_t k = 1; k < res.size(); ++k) o.require(res[k] * 4.0 <= res[k - 1], "4x per doubling");
    const auto C = catenoid(-1.5, 1.5);
    const auto E = ellipsoid(2, 1, 1);
    const double rc = willmore_residual(build_cgm(C, default_grid(C, 128, 128))).sup;
    const double re = willmore_residual(build_cgm(E, default_grid(E, 128, 128))).sup;
    o.detail << "; ellipsoid " << re << " vs catenoid " << rc;
    o.require(re > 10.0 * rc, "ellipsoid above 10x catenoid");
    return o;
}

Outcome residue_identity() {
    Outcome o;
    double worst = 0;
    std::vector<ParametricImmersion> fx = {catenoid(-2, 2), inverted_catenoid(0.5, -1.5, 1.5)};
    for (double eps : {0.2, 0.1, 0.05}) fx.push_back(neck_member(eps));
    for (const auto& phi : fx) {
        const ResidueReport r = residue_identity_defect(build_cgm(phi, default_grid(phi, 401, 64)));
        for (std::size_t i = 0; i < r.t.size(); ++i) {
            worst = std::max(worst, r.beta[i] > 0 ? r.defect[i] / r.beta[i] : r.defect[i]);
            if (r.defect[i] > 1e-5 * r.beta[i]) {
                o.require(false, phi.name + " at t=" + std::to_string(r.t[i]));
                break;
            }
        }
    }
    o.detail << fx.size() << " cylinder fixtures, max defect/beta=" << worst;
    return o;
}

Outcome gauge() {
    Outcome o;
    const auto N = neck_member(0.1);
    const ConformalGaussField F = build_cgm(N, default_grid(N, 257, 64));
    double post = 0, inv = 0;
    for (double a : {0.5, 1.5, 2.5}) {
        const GaugeReport g = find_balancing_inversion(N, F, {a, a + 1.0});
        post = std::max(post, g.post_average);
        inv = std::max(inv, g.invariance_defect);
        o.require(g.min_distance > 0, "positive distance");
    }
    o.detail << "3 annuli, max post-average |H|=" << post << " max traceless invariance defect=" << inv;
    o.require(post <= 1e-6, "post-average");
    o.require(inv <= 1e-6, "invariance");
    return o;
}

Outcome neck_trend() {
    Outcome o;
    std::vector<double> ab, res, nr;
    for (double eps : {0.2, 0.1, 0.05}) {
        const auto N = neck_member(eps);
        const ConformalGaussField F = build_cgm(N, default_grid(N, 401, 64));
        const double T = neck_scale(eps);
        const TRange R{1.5 * T, 2.0 * T};
        const CylinderDiagnostics d = circle_quantities(F, R);
        const Reparametrization rp = reparametrize(F, ReparamMode::euclid_arclength_of_average, R);
        const LineFit fit = line_fit(rp.s, d.Ystar);
        ab.push_back(sup_alpha_over_beta(d));
        res.push_back(fit.residual);
        nr.push_back(fit.null_ratio);
    }
    o.detail << "sup a/b " << ab[0] << ' ' << ab[1] << ' ' << ab[2] << "; fit residual " << res[0] << ' ' << res[1]
             << ' ' << res[2] << "; null ratio " << nr[0] << ' ' << nr[1] << ' ' << nr[2];
    for (int k = 1; k < 3; ++k) {
        o.require(ab[k] < ab[k - 1], "alpha/beta trend");
        o.require(res[k] < res[k - 1], "fit residual trend");
        o.require(nr[k] < nr[k - 1], "null ratio trend");
    }
    return o;
}

Outcome constraint_identities() {
    Outcome o;
    const auto T = clifford_torus();
    const ConformalGaussField F = build_cgm(T, default_grid(T, 64, 64));
    const double R = std::sqrt(2.0);
    gen::Rng r(1009);
    double worst_b = 0, worst_a = 0;
    for (int k = 0; k < 5; ++k) {
        const gen::TrigPoly beta = gen::trig_poly(r, 3), a0 = gen::trig_poly(r, 3), a1 = gen::trig_poly(r, 3);
        VariationField Vb{{}, 0, 2 * pi, "beta nu"}, Va{{}, 0, 2 * pi, "alpha dnu"};
        for (int i = 0; i < F.grid.nt(); ++i)
            for (int j = 0; j < F.grid.ns(); ++j) {
                const double t = F.grid.t.nodes[i], s = F.grid.s.nodes[j];
                const int n = F.grid.index(i, j);
                Vb.Z.push_back(beta(t, s) * F.nu[n]);
                Va.Z.push_back(a0(t, s) * F.dnu[0][n] + a1(t, s) * F.dnu[1][n]);
            }
        const ConstraintResiduals cb = constraint_residuals(F, Vb), ca = constraint_residuals(F, Va);
        for (int i = 0; i < F.grid.nt(); ++i)
            for (int j = 0; j < F.grid.ns(); ++j) {
                const double t = F.grid.t.nodes[i], s = F.grid.s.nodes[j];
                const int n = F.grid.index(i, j);
                const double div = a0.dt(t, s) - std::sin(t) / (R + std::cos(t)) * a0(t, s) + a1.ds(t, s);
                worst_b = std::max(worst_b, std::abs(cb.r1[n] + 2.0 * beta(t, s)));
                worst_a = std::max(worst_a, std::abs(ca.r1[n] + 2.0 * div));
            }
    }
    o.detail << "5 random fields, max |r1 + 2 beta|=" << worst_b << " max |r1 + 2 div alpha|=" << worst_a;
    o.require(worst_b <= 1e-4, "beta identity");
    o.require(worst_a <= 1e-4, "divergence identity");
    return o;
}

Outcome second_variation_oracle() {
    Outcome o;
    gen::Rng r(1010);
    double worst = 0, worst_scale = 0;
    const std::vector<std::pair<ParametricImmersion, std::pair<double, double>>> cases = {
        {catenoid(-2, 2), {-1.5, 1.5}}, {neck_member(0.2), {-3.0, 3.0}}};
    for (const auto& [phi, support] : cases) {
        const ConformalGaussField F = build_cgm(phi, default_grid(phi, 201, 48));
        for (int k = 0; k < 5; ++k) {
            std::vector<gen::TrigPoly> V;
            for (int c = 0; c < 5; ++c) V.push_back(gen::trig_poly(r, 2));
            VariationField Z{{}, support.first, support.second, "random"};
            for (int i = 0; i < F.grid.nt(); ++i)
                for (int j = 0; j < F.grid.ns(); ++j) {
                    const double t = F.grid.t.nodes[i], s = F.grid.s.nodes[j];
                    Vec5 v;
                    for (int c = 0; c < 5; ++c) v(c) = V[c](t, s);
                    const Vec5& Y = F.Y[F.grid.index(i, j)];
                    Z.Z.push_back(gen::bump(t, support.first, support.second) * (v - eta_inner(v, Y) * Y));
                }
            const double closed = second_variation_dirichlet(F, Z);
            const double fd = fd_second_variation(F, Z, Functional::dirichlet).value;
            worst = std::max(worst, std::abs(fd - closed) / std::abs(closed));
            const double c = r.uniform(0.25, 4.0);
            VariationField cZ = Z;
            for (Vec5& z : cZ.Z) z *= c;
            const double scaled = second_variation_dirichlet(F, cZ);
            worst_scale = std::max(worst_scale, std::abs(scaled - c * c * closed) / std::abs(c * c * closed));
        }
    }
    o.detail << "10 fields on 2 fixtures, max relative |closed - fd|=" << worst
             << " max relative c^2 scaling defect=" << worst_scale;
    o.require(worst <= 1e-4, "finite-difference agreement");
    o.require(worst_scale <= 1e-10, "quadratic scaling");
    return o;
}

Outcome negativity_certificate_run() {
    Outcome o;
    const auto N = neck_member(0.05);
    const ConformalGaussField F = build_cgm(N, default_grid(N, 401, 64));
    const double area = cylinder_area(F, {});
    const QuadraticFormReport q = negativity_certificate(F, {}, area / 1.5);
    o.detail << "eps=0.05 ell=" << q.ell << " d2D=" << q.d2D << " d2D_fd=" << q.d2D_fd << " d2A_fd=" << q.d2A_fd
             << " bound=" << q.bound << " profile defect=" << q.profile_defect;
    o.require(q.d2D < 0.0, "d2D < 0");
    o.require(q.d2A_fd <= q.d2D + 1e-6, "d2A_fd <= d2D + 1e-6");
    o.require(q.profile_defect <= 1e-6, "profile cross-check");
    o.require(q.bound < 0.0, "bound sign");
    return o;
}

Outcome gauss_curvature() {
    Outcome o;
    std::vector<double> K;
    for (double eps : {0.2, 0.1, 0.05}) {
        const auto N = neck_member(eps);
        const double T = neck_scale(eps);
        K.push_back(std::abs(gauss_curvature_integral(N, default_grid(N, 401, 64), 1.5 * T, 2.0 * T)));
    }
    o.detail << "annulus |int K| " << K[0] << ' ' << K[1] << ' ' << K[2];
    o.require(K[1] < K[0] && K[2] < K[1], "annulus trend");
    double worst = 0;
    for (const auto& phi : {round_sphere(1.0), clifford_torus(), ellipsoid(2, 1, 1), clifford_torus_s3()}) {
        const double d =
            std::abs(gauss_curvature_integral(phi, default_grid(phi, 128, 128)) - 2 * pi * phi.euler_characteristic);
        worst = std::max(worst, d);
    }
    o.detail << "; closed |int K - 2 pi chi| max " << worst;
    o.require(worst <= 1e-5, "Gauss-Bonnet");
    return o;
}

Outcome umbilic_perturbation() {
    Outcome o;
    const auto B = umbilic_band(-0.5, 0.5);
    const auto g = default_grid(B, 129, 64);
    auto umbilic_rows = [&](const ParametricImmersion& phi) {
        const ConformalGaussField F = build_cgm(phi, g);
        int rows = 0;
        for (int i = 0; i < g.nt(); ++i) {
            bool all = true;
            for (int j = 0; j < g.ns(); ++j) all = all && F.umbilic[g.index(i, j)];
            rows += all;
        }
        return rows;
    };
    const int before = umbilic_rows(B);
    const double eps = 0.05;
    const ReparamReport rep = umbilic_circle_perturbation(B, 0.0, 0.3, 0.5, 2, eps, g);
    const int after = umbilic_rows(rep.immersion);
    o.detail << "umbilic circles before " << before << " after " << after << "; a=" << rep.a
             << " W1 norm=" << rep.w1_norm << " min jacobian=" << rep.min_jacobian;
    o.require(before == 1, "one umbilic circle before");
    o.require(after == 0, "none after");
    o.require(rep.w1_norm <= eps, "W1 bound");
    o.require(rep.min_jacobian > 0.0, "diffeomorphism");
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"energy identities", energy_identities},
        {"de Sitter membership and conformality", desitter_and_conformality},
        {"Moebius equivariance", equivariance},
        {"A = D = E/2", area_dirichlet_traceless},
        {"Willmore discrimination", willmore_discrimination},
        {"residue identity", residue_identity},
        {"balancing gauge", gauge},
        {"neck trend", neck_trend},
        {"constraint identities", constraint_identities},
        {"second-variation oracle", second_variation_oracle},
        {"negativity certificate", negativity_certificate_run},
        {"Gauss curvature", gauss_curvature},
        {"umbilic circle perturbation", umbilic_perturbation},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        if (!o.pass) ++failures;
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
