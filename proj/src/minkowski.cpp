#include "willmore/minkowski.hpp"

#include <cmath>

#include "willmore/errors.hpp"

namespace willmore {

const Mat5& eta_matrix() {
    static const Mat5 eta = [] {
        Mat5 m = Mat5::Identity();
        m(4, 4) = -1.0;
        return m;
    }();
    return eta;
}

Vec5 basis5(int i) {
    Vec5 v = Vec5::Zero();
    v(i) = 1.0;
    return v;
}

double eta_inner(const Vec5& u, const Vec5& v) {
    return u(0) * v(0) + u(1) * v(1) + u(2) * v(2) + u(3) * v(3) - u(4) * v(4);
}

double eta_norm2(const Vec5& u) { return eta_inner(u, u); }

double xi_norm2(const Vec5& u) { return u.squaredNorm(); }

const char* to_string(CausalClass c) {
    switch (c) {
        case CausalClass::spacelike: return "spacelike";
        case CausalClass::lightlike: return "lightlike";
        case CausalClass::timelike: return "timelike";
        case CausalClass::zero: return "zero";
    }
    return "unknown";
}

CausalClass causal_class(const Vec5& u, double tau_null) {
    const double x2 = xi_norm2(u);
    if (x2 == 0.0) return CausalClass::zero;
    const double e2 = eta_norm2(u);
    if (std::abs(e2) <= tau_null * x2) return CausalClass::lightlike;
    return e2 > 0 ? CausalClass::spacelike : CausalClass::timelike;
}

GroupCheck verify_so41(const Mat5& M, double tau_group) {
    const Mat5& eta = eta_matrix();
    const double defect = (M.transpose() * eta * M - eta).cwiseAbs().maxCoeff();
    return {defect <= tau_group, defect};
}

NullPair null_normal_pair(const Vec5& s1, const Vec5& s2, const Vec5& s3) {
    Eigen::Matrix<double, 5, 3> S;
    S << s1, s2, s3;
    const double scale = S.cwiseAbs().maxCoeff();
    if (!(scale > 0)) throw Error(ErrorKind::rank, "null_normal_pair: zero span");

    Eigen::JacobiSVD<Eigen::Matrix<double, 5, 3>> svd_span(S);
    const auto sv = svd_span.singularValues();
    if (sv(2) <= 1e-12 * sv(0)) throw Error(ErrorKind::rank, "null_normal_pair: span has rank < 3");

    const Eigen::Matrix3d gram = S.transpose() * eta_matrix() * S;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> gram_eig(gram);
    if (gram_eig.eigenvalues()(0) <= 1e-12 * gram.cwiseAbs().maxCoeff())
        throw Error(ErrorKind::causality, "null_normal_pair: span is not spacelike");

    // eta-normal plane = kernel of S^T eta.
    const Eigen::Matrix<double, 3, 5> C = S.transpose() * eta_matrix();
    Eigen::JacobiSVD<Eigen::Matrix<double, 3, 5>> svd(C, Eigen::ComputeFullV);
    Eigen::Matrix<double, 5, 2> P = svd.matrixV().rightCols<2>();

    const Eigen::Matrix2d g2 = P.transpose() * eta_matrix() * P;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(g2);
    const double lm = eig.eigenvalues()(0);
    const double lp = eig.eigenvalues()(1);
    const Vec5 T = P * eig.eigenvectors().col(0) / std::sqrt(-lm);
    Vec5 X = P * eig.eigenvectors().col(1) / std::sqrt(lp);

    auto build = [&](const Vec5& spacelike) {
        NullPair out;
        Vec5 n = T + spacelike;
        Vec5 ns = T - spacelike;
        double k = 1.0 / std::sqrt(2.0);
        out.normalized = std::abs(n(4)) > 1e-12 * n.norm();
        if (out.normalized) k = 1.0 / n(4);
        out.nu = k * n;
        out.nu_star = ns / (2.0 * k);
        return out;
    };

    NullPair pair = build(X);
    Mat5 B;
    B << S, pair.nu, pair.nu_star;
    if (B.determinant() < 0) pair = build(-X);
    return pair;
}

}  // namespace willmore
