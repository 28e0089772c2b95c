#pragma once

#include <Eigen/Dense>

namespace willmore {

// R^{4,1}: eta = diag(1,1,1,1,-1).
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

inline constexpr double kTauGroup = 1e-9;
inline constexpr double kTauNull = 1e-6;

const Mat5& eta_matrix();
Vec5 basis5(int i);  // 0-based

double eta_inner(const Vec5& u, const Vec5& v);
double eta_norm2(const Vec5& u);
double xi_norm2(const Vec5& u);

enum class CausalClass { spacelike, lightlike, timelike, zero };

const char* to_string(CausalClass c);

CausalClass causal_class(const Vec5& u, double tau_null = kTauNull);

struct GroupCheck {
    bool ok;
    double defect;  // max |M^T eta M - eta|
};

GroupCheck verify_so41(const Mat5& M, double tau_group = kTauGroup);

struct NullPair {
    Vec5 nu;
    Vec5 nu_star;
    bool normalized;  // false when nu_5 vanishes and nu_5 = 1 could not be imposed
};

// Null basis of the eta-normal plane of a spacelike 3-span.
// <nu,nu*> = -1, det(s1,s2,s3,nu,nu*) > 0, nu_5 = 1 when possible.
NullPair null_normal_pair(const Vec5& s1, const Vec5& s2, const Vec5& s3);

}  // namespace willmore
