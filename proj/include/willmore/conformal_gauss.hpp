#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include "willmore/immersion.hpp"

namespace willmore {

// Sampled conformal Gauss map Y with its frame on a quadrature grid.
struct ConformalGaussField {
    QuadratureGrid grid;
    Ambient ambient = Ambient::R3;
    std::string source_name;
    bool closed = false;
    int euler_characteristic = 0;
    bool conformal_chart = false;

    std::vector<Vec5> Y;
    std::vector<Vec5> dY[2];         // grid differentiation of Y
    std::vector<Vec5> dY_closed[2];  // dH nu - A0_i^j d_j nu
    std::vector<Vec5> d2Y[3];        // tt, ts, ss
    double closed_form_discrepancy = 0.0;

    std::vector<Vec4> x;
    std::vector<double> H;
    std::vector<double> dH[2];
    std::vector<Eigen::Matrix2d> g;
    std::vector<Eigen::Matrix2d> g_inv;
    std::vector<Eigen::Matrix2d> A0;
    std::vector<double> sqrt_g;
    std::vector<double> A0_norm2;
    std::vector<double> K;

    std::vector<Vec5> nu;
    std::vector<Vec5> dnu[2];
    std::vector<Vec5> nu_star;  // from the null frame; zero at umbilic nodes
    std::vector<char> umbilic;

    int size() const { return grid.size(); }
    int umbilic_count() const;
};

inline constexpr double kUmbilicRelative = 1e-8;
inline constexpr double kUmbilicFloor = 1e-12;

ConformalGaussField build_cgm(const ParametricImmersion& phi, const QuadratureGrid& grid);

// Transform the sampled field by an isometry: Y -> M Y and likewise for the frame.
ConformalGaussField transform_field(const ConformalGaussField& F, const Mat5& M);

// g^{ij} <d_i Y, d_j Y>_eta per node.
std::vector<double> grad_eta2(const ConformalGaussField& F);

// (1/sqrt g) d_i (sqrt g g^{ij} d_j f) by grid differentiation.
std::vector<double> laplace_g(const ConformalGaussField& F, const std::vector<double>& f);
std::vector<Vec5> laplace_g(const ConformalGaussField& F, const std::vector<Vec5>& f);

struct ConformalityReport {
    std::vector<double> defect;
    double max_defect = 0.0;
};

ConformalityReport conformality_defect(const ConformalGaussField& F);

struct EnergyReport {
    double area = 0.0;       // A(Y)
    double dirichlet = 0.0;  // D(Y)
    double E_of_source = 0.0;
};

EnergyReport energies(const ConformalGaussField& F);

struct WillmoreResidual {
    std::vector<Vec5> R;                   // Delta_g Y + |dY|^2 Y
    std::vector<double> R_norm;            // |R|_xi
    std::vector<double> constraint_defect; // |R - (Delta_g H + |dY|^2 H) nu|_xi
    double sup = 0.0;
    double sup_constraint = 0.0;
};

WillmoreResidual willmore_residual(const ConformalGaussField& F);

struct HopfReport {
    std::vector<std::complex<double>> h;
    std::vector<std::complex<double>> Q;
    std::vector<double> dbar_Q;
    double sup_h = 0.0;
    double sup_Q = 0.0;
    double sup_dbar_Q = 0.0;
};

HopfReport hopf_and_quartic(const ConformalGaussField& F);

struct RecoveryReport {
    std::vector<Vec4> x;
    std::vector<char> valid;
    int valid_count = 0;
    double max_error = 0.0;  // against the source samples
    bool impossible = false;
};

RecoveryReport recover_immersion(const ConformalGaussField& F);

// max |<d_i Y, d_j nu>_eta + A0_ij|
double shape_operator_defect(const ConformalGaussField& F);

void write_field_csv(const ConformalGaussField& F, std::ostream& os);

}  // namespace willmore
