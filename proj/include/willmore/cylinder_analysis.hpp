#pragma once

#include <iosfwd>
#include <optional>

#include "willmore/conformal_gauss.hpp"

namespace willmore {

// Rows of a cylinder grid with t in [ta, tb]; the whole axis when absent.
struct TRange {
    double ta = -1e300;
    double tb = 1e300;
};

// Circle integrals use the flat gradient (d_t, d_theta) of the cylinder chart.
struct CylinderDiagnostics {
    std::vector<int> rows;
    std::vector<double> t;
    std::vector<double> w;  // trapezoid weights along the selected rows
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> gamma;
    std::vector<double> delta;
    std::vector<Vec5> Ystar;
    std::vector<double> lorentz_density;  // (int |grad Y|^2_eta dtheta)^{1/2}
    double ell = 0.0;
};

CylinderDiagnostics circle_quantities(const ConformalGaussField& F, const TRange& range = {});

struct ResidueReport {
    std::vector<double> t;
    std::vector<double> defect;  // |int |Y_t|^2_eta - int |Y_theta|^2_eta|
    std::vector<double> beta;
    double max_defect = 0.0;
    double max_relative = 0.0;   // max defect / beta
};

ResidueReport residue_identity_defect(const ConformalGaussField& F, const TRange& range = {});

struct ConvexityReport {
    double tol = 0.0;
    int interior = 0;
    int convex_violations = 0;  // alpha'' < alpha - tol
    double worst_convexity = 0.0;  // min (alpha'' - alpha)
    bool max_principle = true;     // alpha <= max(alpha(t1), alpha(t2)) + tol
    double lambda = 0.0;
    double mu = 0.0;
    bool barrier = true;           // alpha <= lambda e^t + mu e^-t + tol
    double barrier_excess = 0.0;
    bool ok() const { return convex_violations == 0 && max_principle && barrier; }
};

// tol < 0 selects 1e-3 times the largest compared quantity.
ConvexityReport convexity_certificate(const std::vector<double>& t, const std::vector<double>& alpha, double t1,
                                      double t2, double tol = -1.0);
ConvexityReport convexity_certificate(const CylinderDiagnostics& diag, double t1, double t2, double tol = -1.0);

struct OscillationReport {
    double osc = 0.0;
    double grad_sup = 0.0;     // sup |grad Y|_xi
    double euclid_length = 0.0;
    double bound = 0.0;        // 4 pi grad_sup + (2 pi)^{-1/2} euclid_length
    bool within_bound = false;
};

OscillationReport oscillation(const ConformalGaussField& F, const TRange& range = {});

enum class ReparamMode { lorentz_average, euclid_arclength_of_average };

struct Reparametrization {
    ReparamMode mode = ReparamMode::lorentz_average;
    std::vector<int> rows;
    std::vector<double> t;
    std::vector<double> density;
    std::vector<double> s;  // s(t_first) = 0
    double length = 0.0;
};

Reparametrization reparametrize(const ConformalGaussField& F, ReparamMode mode, const TRange& range = {});

struct LineFit {
    Vec5 a = Vec5::Zero();
    Vec5 b = Vec5::Zero();
    double residual = 0.0;  // max |Y - (a s + b)|_xi
    double a_eta2 = 0.0;
    double b_eta2_minus_one = 0.0;
    double ab_eta = 0.0;
    double null_ratio = 0.0;  // ||a|^2_eta| / |a|^2_xi
    CausalClass causal = CausalClass::zero;
};

LineFit line_fit(const std::vector<double>& s, const std::vector<Vec5>& samples);

struct GeodesicReport {
    double residual = 0.0;      // sup |d^2_ss Y*|_xi
    double sup_alpha_over_beta = 0.0;
};

GeodesicReport geodesic_residual(const ConformalGaussField& F, const TRange& range = {});

double sup_alpha_over_beta(const CylinderDiagnostics& diag);

void write_cylinder_csv(const CylinderDiagnostics& diag, std::ostream& os);

}  // namespace willmore
