#include <gtest/gtest.h>

#include <sstream>

#include "generators.hpp"
#include "oracles.hpp"
#include "willmore/cylinder_analysis.hpp"
#include "willmore/errors.hpp"

using namespace willmore;
using oracle::pi;

namespace {

// Field carrying only Y and its grid derivatives.
ConformalGaussField synthetic(const std::function<Vec5(double, double)>& Y, double t0, double t1, int nt, int ns) {
    ConformalGaussField F;
    F.grid = {make_axis(Rule::trapezoid, t0, t1, nt), make_axis(Rule::periodic, 0, 2 * pi, ns)};
    for (int i = 0; i < nt; ++i)
        for (int j = 0; j < ns; ++j) F.Y.push_back(Y(F.grid.t.nodes[i], F.grid.s.nodes[j]));
    const GridDiff D(F.grid);
    F.dY[0] = D.dt(F.Y);
    F.dY[1] = D.ds(F.Y);
    F.d2Y[0] = D.dtt(F.Y);
    F.d2Y[1] = D.dts(F.Y);
    F.d2Y[2] = D.dss(F.Y);
    F.umbilic.assign(F.Y.size(), 0);
    return F;
}

ConformalGaussField neck_field(double eps, int nt = 401, int ns = 64) {
    const auto N = neck_member(eps);
    return build_cgm(N, default_grid(N, nt, ns));
}

}  // namespace

TEST(CircleQuantities, ConstantField) {
    const Vec5 c = oracle::sphere_Y(Eigen::Vector3d(1, 0, 0), 2.0);
    const CylinderDiagnostics d = circle_quantities(synthetic([c](double, double) { return c; }, 0, 1, 16, 16));
    for (std::size_t i = 0; i < d.t.size(); ++i) {
        EXPECT_LE(d.alpha[i] + d.beta[i] + d.gamma[i] + d.delta[i], 1e-20);
        EXPECT_LE(oracle::sup_diff(d.Ystar[i], c), 1e-15);
    }
    EXPECT_NEAR(d.ell, 0.0, 1e-12);
}

TEST(CircleQuantities, ThetaIndependentField) {
    auto c = [](double t) {
        Vec5 v;
        v << std::sin(t), t * t, 1.0, 0.0, std::cos(t);
        return v;
    };
    const CylinderDiagnostics d = circle_quantities(synthetic([&](double t, double) { return c(t); }, 0, 1, 32, 16));
    for (std::size_t i = 0; i < d.t.size(); ++i) {
        EXPECT_LE(d.alpha[i], 1e-20);
        EXPECT_LE(d.gamma[i], 1e-16);
        EXPECT_LE(oracle::sup_diff(d.Ystar[i], c(d.t[i])), 1e-14);
        const double speed2 = std::cos(d.t[i]) * std::cos(d.t[i]) + 4 * d.t[i] * d.t[i] +
                              std::sin(d.t[i]) * std::sin(d.t[i]);
        EXPECT_NEAR(d.beta[i], 2 * pi * speed2, 1e-6);
    }
}

TEST(CircleQuantities, NeckAgainstQuadratureOracle) {
    const double eps = 0.1;
    const ConformalGaussField F = neck_field(eps);
    const CylinderDiagnostics d = circle_quantities(F, {-3.0, 3.0});
    auto Y = [eps](double t, double s) { return oracle::inverted_catenoid_Y(eps, t, s); };
    for (std::size_t i = 0; i < d.t.size(); i += 7) {
        const oracle::CircleRef ref = oracle::circle_reference(Y, d.t[i]);
        EXPECT_NEAR(d.alpha[i], ref.alpha, 1e-6 * std::max(1.0, ref.alpha)) << d.t[i];
        EXPECT_NEAR(d.beta[i], ref.beta, 1e-6 * std::max(1.0, ref.beta)) << d.t[i];
        EXPECT_LE(d.alpha[i], d.beta[i] + 1e-12);
    }
}

TEST(CircleQuantities, NeedsPeriodicTheta) {
    ConformalGaussField F = synthetic([](double, double) { return Vec5(Vec5::Zero()); }, 0, 1, 16, 16);
    F.grid.s = make_axis(Rule::trapezoid, 0, 1, 16);
    EXPECT_THROW(circle_quantities(F), Error);
}

TEST(Residue, SphereAndNeck) {
    const auto S = round_sphere(1.0);
    const ResidueReport rs = residue_identity_defect(build_cgm(S, default_grid(S, 16, 16)));
    EXPECT_LE(rs.max_defect, 1e-20);
    const ResidueReport rn = residue_identity_defect(neck_field(0.1));
    EXPECT_LE(rn.max_relative, 1e-5);
}

TEST(Residue, NonConformalChartIsDetected) {
    // catenoid traversed at double speed in t
    ParametricImmersion p = catenoid(-1, 1);
    auto base = p.analytic;
    p.analytic = [base](double t, double s) {
        Jet j = base(2 * t, s);
        j.xt *= 2;
        j.xtt *= 4;
        j.xts *= 2;
        return j;
    };
    p.position = [base](double t, double s) { return base(2 * t, s).x; };
    p.t0 = -0.5;
    p.t1 = 0.5;
    const ResidueReport r = residue_identity_defect(build_cgm(p, default_grid(p, 65, 32)));
    EXPECT_GT(r.max_relative, 0.1);
}

TEST(Convexity, TrivialAndCosh) {
    std::vector<double> t, zero, ch;
    for (int i = 0; i <= 200; ++i) {
        t.push_back(-2 + 0.02 * i);
        zero.push_back(0.0);
        ch.push_back(std::cosh(t.back()));
    }
    EXPECT_TRUE(convexity_certificate(t, zero, -2, 2).ok());
    const ConvexityReport c = convexity_certificate(t, ch, -2, 2);
    EXPECT_TRUE(c.ok());
    EXPECT_NEAR(c.lambda, 0.5, 1e-12);
    EXPECT_NEAR(c.mu, 0.5, 1e-12);
    EXPECT_LE(std::abs(c.worst_convexity), 1e-3);
    EXPECT_LE(c.barrier_excess, 1e-12);
    EXPECT_THROW(convexity_certificate({0, 1}, {0, 0}, 0, 1), Error);
}

TEST(Convexity, ConcaveBumpFails) {
    std::vector<double> t, a;
    for (int i = 0; i <= 100; ++i) {
        t.push_back(-1 + 0.02 * i);
        a.push_back(1.0 - t.back() * t.back());
    }
    const ConvexityReport c = convexity_certificate(t, a, -1, 1);
    EXPECT_FALSE(c.ok());
    EXPECT_FALSE(c.max_principle);
    EXPECT_GT(c.convex_violations, 0);
}

TEST(Convexity, NeckAnnulusPasses) {
    const double T = neck_scale(0.1);
    const CylinderDiagnostics d = circle_quantities(neck_field(0.1), {1.5 * T, 2.0 * T});
    EXPECT_TRUE(convexity_certificate(d, d.t.front(), d.t.back()).ok());
}

TEST(Oscillation, ConstantAndSegment) {
    const Vec5 c = Vec5::Ones();
    EXPECT_NEAR(oscillation(synthetic([c](double, double) { return c; }, 0, 1, 16, 8)).osc, 0.0, 1e-15);
    const Vec5 v = (Vec5() << 1, 2, 0, 0, 2).finished();
    const OscillationReport r = oscillation(synthetic([v](double t, double) { return Vec5(t * v); }, 0, 2, 17, 8));
    EXPECT_NEAR(r.osc, 2 * v.norm(), 1e-12);
    EXPECT_GE(r.bound, r.osc);
    EXPECT_TRUE(r.within_bound);
}

TEST(Oscillation, NeckWithinBound) {
    const double T = neck_scale(0.1);
    const OscillationReport r = oscillation(neck_field(0.1, 201, 32), {1.5 * T, 2.0 * T});
    EXPECT_TRUE(r.within_bound);
    EXPECT_GT(r.osc, 0.0);
}

TEST(Reparametrize, ConstantSpeedIsAffine) {
    const Vec5 v = (Vec5() << 0, 3, 0, 4, 0).finished();
    const ConformalGaussField F = synthetic([v](double t, double) { return Vec5(t * v); }, 0, 2, 33, 8);
    const Reparametrization r = reparametrize(F, ReparamMode::euclid_arclength_of_average);
    for (std::size_t i = 0; i < r.t.size(); ++i) EXPECT_NEAR(r.s[i], 5.0 * r.t[i], 1e-12);
    EXPECT_NEAR(r.length, 10.0, 1e-12);
}

TEST(Reparametrize, UmbilicCircleError) {
    // the whole gradient vanishes on the circle t = 0
    auto Y = [](double t, double s) { return Vec5((Vec5() << t * t * std::cos(s), t * t * std::sin(s), 0, 0, 0).finished()); };
    const ConformalGaussField F = synthetic(Y, -1, 1, 21, 8);
    try {
        reparametrize(F, ReparamMode::lorentz_average);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::umbilic_circle);
        EXPECT_NE(std::string(e.what()).find("umbilic_circle_perturbation"), std::string::npos);
    }
}

TEST(LineFit, ExactNullLine) {
    const Vec5 a = (Vec5() << 1, 0, 0, 0, 1).finished() / std::sqrt(2.0);
    std::vector<double> s;
    std::vector<Vec5> y;
    for (int k = 0; k < 20; ++k) {
        s.push_back(0.1 * k);
        y.push_back(a * s.back() + basis5(3));
    }
    const LineFit f = line_fit(s, y);
    EXPECT_LE(f.residual, 1e-14);
    EXPECT_NEAR(f.a_eta2, 0.0, 1e-14);
    EXPECT_NEAR(f.b_eta2_minus_one, 0.0, 1e-14);
    EXPECT_NEAR(f.ab_eta, 0.0, 1e-14);
    EXPECT_EQ(f.causal, CausalClass::lightlike);
}

TEST(LineFit, ArcAndDegenerateInputs) {
    std::vector<double> s;
    std::vector<Vec5> y;
    for (int k = 0; k < 20; ++k) {
        s.push_back(0.15 * k);
        y.push_back((Vec5() << std::cos(s.back()), std::sin(s.back()), 0, 0, 0).finished());
    }
    EXPECT_GT(line_fit(s, y).residual, 0.05);
    EXPECT_THROW(line_fit({0.0}, {Vec5::Zero()}), Error);
    try {
        line_fit({0, 1, 2}, {Vec5::Ones(), Vec5::Ones(), Vec5::Ones()});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::degenerate_fit);
    }
}

TEST(Geodesic, StraightAndCurved) {
    const Vec5 v = (Vec5() << 1, 2, 3, 0, 0).finished();
    EXPECT_LE(geodesic_residual(synthetic([v](double t, double) { return Vec5(t * v); }, 0, 1, 33, 8)).residual,
              1e-10);
    // circle of radius 2 traversed in t: curvature 1/2
    auto arc = [](double t, double) { return Vec5((Vec5() << 2 * std::cos(t), 2 * std::sin(t), 0, 0, 0).finished()); };
    EXPECT_NEAR(geodesic_residual(synthetic(arc, 0, 1, 65, 8)).residual, 0.5, 1e-6);
}

TEST(Geodesic, NeckFamilyTrend) {
    double prev_ratio = 1e9, prev_res = 1e9;
    for (double eps : {0.2, 0.1, 0.05}) {
        const double T = neck_scale(eps);
        const ConformalGaussField F = neck_field(eps, 201, 32);
        const GeodesicReport g = geodesic_residual(F, {1.5 * T, 2.0 * T});
        EXPECT_LT(g.sup_alpha_over_beta, prev_ratio);
        EXPECT_LT(g.residual, prev_res);
        prev_ratio = g.sup_alpha_over_beta;
        prev_res = g.residual;
    }
}

TEST(CylinderCsv, SchemaHeader) {
    const CylinderDiagnostics d = circle_quantities(neck_field(0.2, 33, 16));
    std::ostringstream os;
    write_cylinder_csv(d, os);
    std::istringstream is(os.str());
    std::string l1, l2;
    std::getline(is, l1);
    std::getline(is, l2);
    EXPECT_EQ(l1, "# schema=willmore.cylinder_diagnostics.v1");
    EXPECT_EQ(l2, "t,alpha,beta,gamma,delta,Ystar_1,Ystar_2,Ystar_3,Ystar_4,Ystar_5");
}
