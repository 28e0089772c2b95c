#pragma once

#include <optional>

#include "willmore/conformal_gauss.hpp"
#include "willmore/moebius.hpp"

namespace willmore {

// Band of chart rows with t in [ta, tb], all of theta.
struct AnnulusSpec {
    double ta = 0.0;
    double tb = 0.0;
};

struct AnnulusAverage {
    Vec5 Ybar = Vec5::Zero();
    double Hbar = 0.0;
    int rows = 0;
};

// Flat chart measure dt dtheta.
AnnulusAverage annulus_averages(const ConformalGaussField& F, const AnnulusSpec& A);

struct BalancingSphere {
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    double radius = 0.0;
};

// Empty when |Hbar| <= tau_H: no inversion is needed.
std::optional<BalancingSphere> balancing_sphere(const Vec5& Ybar, double Hbar);

double balancing_tolerance(const Vec5& Ybar);

struct GaugeReport {
    AnnulusSpec annulus;
    Vec5 Ybar = Vec5::Zero();
    double Hbar = 0.0;
    bool already_balanced = false;
    BalancingSphere sphere;
    Eigen::Vector3d a = Eigen::Vector3d::Zero();
    Mat5 M = Mat5::Identity();
    double t_bound = 0.0;
    double min_distance = 0.0;       // from a to the sampled surface
    int candidates = 0;
    int admissible = 0;
    double post_average = 0.0;       // |avg H| of the rebuilt inverted immersion
    double E_before = 0.0;           // int_A |A0|^2 dvol
    double E_after = 0.0;
    double invariance_defect = 0.0;
    double quadratic_identity_defect = 0.0;
    double conformal_factor_ratio = 1.0;  // max/min of |x - a|^-2 over the annulus
};

inline constexpr int kBalancingCandidates = 256;

// t_bound <= 0 selects max(2 sup_A |Phi|, |c| + r).
GaugeReport find_balancing_inversion(const ParametricImmersion& phi, const ConformalGaussField& F,
                                     const AnnulusSpec& A, double t_bound = 0.0);

// H of the averaged field after x -> (x - a)/|x - a|^2, predicted from the averages alone.
double predicted_balanced_H(const Vec5& Ybar, const Eigen::Vector3d& a);

}  // namespace willmore
