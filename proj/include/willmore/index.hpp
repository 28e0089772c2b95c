#pragma once

#include <string>

#include "willmore/cylinder_analysis.hpp"
#include "willmore/errors.hpp"

namespace willmore {

struct VariationField {
    std::vector<Vec5> Z;  // one per grid node
    double ta = 0.0;      // support in t
    double tb = 0.0;
    std::string recipe;
};

// int sqrt(g) g^{ij} (<D_i Z, D_j Z> - |Z|^2 <d_i Y, d_j Y> + <Z, d_i Y><Z, d_j Y>)
// with D Z = dZ - <dZ, Y> Y.
double second_variation_dirichlet(const ConformalGaussField& F, const VariationField& V);

// 1/2 int sqrt(g) g^{ij} <d_i W, d_j W>_eta for a sampled map W on the grid of F.
double dirichlet_energy(const ConformalGaussField& F, const std::vector<Vec5>& W);
// int sqrt(max(det <d_i W, d_j W>_eta, 0)) dt dtheta
double area_functional(const ConformalGaussField& F, const std::vector<Vec5>& W);

enum class Functional { dirichlet, area };

struct FdSecondDerivative {
    double h = 0.0;
    double coarse = 0.0;  // step 2h
    double fine = 0.0;    // step h
    double value = 0.0;   // Richardson (4 fine - coarse) / 3
};

// d^2/du^2 of the functional along u -> normalize_eta(Y + u Z) at u = 0.
// h <= 0 selects 1e-3 / max |Z|_xi.
FdSecondDerivative fd_second_variation(const ConformalGaussField& F, const VariationField& V, Functional which,
                                       double h = 0.0);

struct ConstraintResiduals {
    std::vector<double> r1;          // <nu, Delta_g Z - |dY|^2 Z>
    std::vector<Eigen::Vector2d> r2; // <nu, D_i Z>
    std::vector<char> used;          // 0 at umbilic nodes
    double r1_max = 0.0;
    double r2_max = 0.0;
    int excluded = 0;
    bool warning = false;            // umbilic nodes met inside the support
};

ConstraintResiduals constraint_residuals(const ConformalGaussField& F, const VariationField& V);

// Unit spacelike E with <E,a> = <E,b> = 0.
Vec5 parallel_direction(const Vec5& a, const Vec5& b);

struct TestFieldIngredients {
    Vec5 E = Vec5::Zero();
    std::vector<int> rows;
    std::vector<double> s;
    std::vector<double> f;
    std::vector<double> rho;
    std::vector<double> density;   // ds/dt
    std::vector<double> d;         // per grid node
    std::vector<Eigen::Vector2d> e;
    double ell = 0.0;
};

struct TestField {
    VariationField field;
    TestFieldIngredients parts;
};

TestField build_test_field(const ConformalGaussField& F, const TRange& interval, const LineFit& fit);

// Integral of |d Y|^2_eta-density (sqrt det Gram) over rows in the range.
double cylinder_area(const ConformalGaussField& F, const TRange& range);

struct QuadraticFormReport {
    double ta = 0.0;
    double tb = 0.0;
    double area = 0.0;
    double mu = 0.0;
    double ell = 0.0;
    double d2D = 0.0;
    double d2D_fd = 0.0;
    double d2A_fd = 0.0;
    double bound = 0.0;  // -pi^3 mu / (2 ell^2)
    double r1_max = 0.0;
    double r2_max = 0.0;
    double tangency = 0.0;  // max |<E_k, Y>|
    double profile_direct = 0.0;
    double profile_expansion = 0.0;
    double profile_defect = 0.0;
    LineFit fit;
    bool negative = false;
    bool area_below_dirichlet = false;  // d2A_fd <= d2D + tol
};

QuadraticFormReport negativity_certificate(const ConformalGaussField& F, const TRange& interval, double mu,
                                           double tol = 1e-6);

struct IndexBoundReport {
    double lambda = 0.0;
    int J = 0;
    double total_area = 0.0;
    std::vector<QuadraticFormReport> pieces;
    int count = 0;
};

// Greedy subdivision into J pieces of area in [lambda/(2J), lambda/J]; throws
// InfeasibleError carrying the largest feasible J.
IndexBoundReport index_lower_bound(const ConformalGaussField& F, double lambda, int J, const TRange& range = {});

// Piece boundaries (in t) of the greedy subdivision, empty when infeasible.
std::vector<TRange> subdivide(const ConformalGaussField& F, double lambda, int J, const TRange& range = {});

}  // namespace willmore
