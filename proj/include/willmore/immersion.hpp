#pragma once

#include <functional>
#include <map>
#include <string>

#include "willmore/grid.hpp"
#include "willmore/minkowski.hpp"

namespace willmore {

enum class Ambient { R3, S3 };
enum class JetMode { analytic, finite_difference };

using Vec4 = Eigen::Vector4d;  // R3 charts keep the last component at zero

// Position and first/second partials in (t, theta).
struct Jet {
    Vec4 x = Vec4::Zero();
    Vec4 xt = Vec4::Zero();
    Vec4 xs = Vec4::Zero();
    Vec4 xtt = Vec4::Zero();
    Vec4 xts = Vec4::Zero();
    Vec4 xss = Vec4::Zero();
};

struct ParametricImmersion {
    std::string name;
    Ambient ambient = Ambient::R3;
    double t0 = 0.0;
    double t1 = 1.0;
    bool periodic_t = false;
    bool singular_ends = false;  // chart collapses at t0 and t1 (sphere-type)
    bool closed = false;
    int euler_characteristic = 0;

    std::function<Jet(double, double)> analytic;  // may be empty
    std::function<Vec4(double, double)> position;
    JetMode jet_mode = JetMode::analytic;
    double fd_step = 1e-3;

    Jet evaluate(double t, double s) const;
    Rule t_rule() const;
};

QuadratureGrid default_grid(const ParametricImmersion& phi, int nt, int ns);

struct FundamentalForms {
    Eigen::Matrix2d g;
    Eigen::Matrix2d g_inv;
    Vec4 N;
    Eigen::Matrix2d A;
    double H = 0.0;
    Eigen::Matrix2d A0;  // traceless part
    double A0_norm2 = 0.0;  // |A0|^2_g
    double K = 0.0;
    double det_g = 0.0;
    double lambda_conf = 0.0;  // 0.5 log g_11, meaningful on conformal charts
    bool conformal = false;
};

FundamentalForms fundamental_forms(const Jet& jet, Ambient ambient);
FundamentalForms fundamental_forms(const ParametricImmersion& phi, double t, double s);

double willmore_W(const ParametricImmersion& phi, const QuadratureGrid& grid);
double traceless_E(const ParametricImmersion& phi, const QuadratureGrid& grid);
double chart_area(const ParametricImmersion& phi, const QuadratureGrid& grid);

struct EnergyIdentity {
    double W;
    double E;
    int chi;
    double defect;       // |E - 2W + 4 pi chi| (S3: W replaced by W + area)
    double normal_form;  // 0.5 int |dN|^2 - chi, reported only
};

// Refuses open charts.
EnergyIdentity energy_identity(const ParametricImmersion& phi, const QuadratureGrid& grid);

// Integral of K over rows with t in [ta, tb]; the whole chart by default.
double gauss_curvature_integral(const ParametricImmersion& phi, const QuadratureGrid& grid,
                                double ta = -1e300, double tb = 1e300);

// Fixtures.
ParametricImmersion round_sphere(double R = 1.0);
ParametricImmersion clifford_torus();
ParametricImmersion catenoid(double t0, double t1);
ParametricImmersion inverted_catenoid(double eps, double t0, double t1);
ParametricImmersion ellipsoid(double a, double b, double c);
ParametricImmersion clifford_torus_s3();
// Surface of revolution tangent to the unit sphere to second order along t = 0.
ParametricImmersion umbilic_band(double t0, double t1);

// Half-length of the neck of inverted_catenoid(eps): arccosh(1/eps).
double neck_scale(double eps);
// inverted_catenoid(eps) on [-2 T, 2 T] with T = neck_scale(eps).
ParametricImmersion neck_member(double eps);

ParametricImmersion build_fixture(const std::string& name, const std::map<std::string, double>& params);

ParametricImmersion scale_immersion(const ParametricImmersion& phi, double factor);
ParametricImmersion moebius_transform_immersion(const ParametricImmersion& phi, const Mat5& M);
ParametricImmersion inverse_stereographic(const ParametricImmersion& phi);

struct ReparamReport {
    ParametricImmersion immersion;
    double a = 0.0;          // amplitude actually used
    double w1_norm = 0.0;    // ||f - id||_{W^{1,inf}}
    double wk_norm = 0.0;    // ||f - id||_{W^{k,inf}}
    double wk_bound = 0.0;   // a * sum_i s^{-i}
    double min_jacobian = 0.0;
    int shrink_steps = 0;
};

// Cutoff: 1 on [t - s/3, t + s/3], 0 outside (t - 2s/3, t + 2s/3).
double umbilic_cutoff(double tau, double t, double s, int derivative = 0);

ReparamReport umbilic_circle_perturbation(const ParametricImmersion& phi, double t, double s, double a,
                                          int k, double eps, const QuadratureGrid& grid);

}  // namespace willmore
